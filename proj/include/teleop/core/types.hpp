#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>

namespace teleop {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

enum class Side : std::uint8_t { Left = 0, Right = 1 };

inline constexpr std::array<Side, 2> kSides{Side::Left, Side::Right};

constexpr std::size_t idx(Side s) { return static_cast<std::size_t>(s); }

template <class T>
using PerArm = std::array<T, 2>;

// Precision (P) or dynamic (D) mapping for one channel. The pilot's hand
// triggers read 0 for P and 1 for D.
enum class Mode : std::uint8_t { P = 0, D = 1 };

constexpr const char* to_string(Mode m) { return m == Mode::P ? "P" : "D"; }

struct RobotState {
  // sagittal cart-pole, ordered as in the linear model [x theta xdot thetadot]
  double x = 0.0;
  double xdot = 0.0;
  double theta = 0.0;
  double thetadot = 0.0;
  // yaw
  double phi = 0.0;
  double phidot = 0.0;
  // per-arm joints
  PerArm<Vec4> q{Vec4::Zero(), Vec4::Zero()};
  PerArm<Vec4> qdot{Vec4::Zero(), Vec4::Zero()};

  bool finite() const;
};

struct PilotInput {
  double theta_H = 0.0;     // torso pitch, rad
  double thetadot_H = 0.0;  // rad/s
  double phi_H = 0.0;       // torso yaw, rad
  double phidot_H = 0.0;    // rad/s
  double M_zH = 0.0;        // forceplate yaw moment, N*m
  PerArm<Vec4> q_aH{Vec4::Zero(), Vec4::Zero()};
  Mode u_s = Mode::P;
  Mode u_y = Mode::P;
  Mode u_A = Mode::P;
  double timestamp = 0.0;

  bool finite() const;
};

}  // namespace teleop
