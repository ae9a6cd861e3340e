#pragma once

#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"

namespace teleop {

// Linearization about upright in state order [x theta xdot thetadot] with a
// single horizontal wheel force input.
struct LinearModel {
  Mat4 A = Mat4::Zero();
  Vec4 B = Vec4::Zero();
};

LinearModel cartpole_linear_dynamics(const PhysicalParams& params);

// Pendular eigenvalue of the linear pitch block, sqrt((M+m) g / (M h_R)).
double cartpole_pendular_frequency(const PhysicalParams& params);

// Time derivative of [x theta xdot thetadot] for the nonlinear cart-pole. The
// pole is a point mass at h_R; `disturbance` is a horizontal force applied at
// that point.
Vec4 cartpole_derivative(const Vec4& s, double wheel_force, double disturbance,
                         const PhysicalParams& params);

// One RK4 step of the sagittal states of `state`; other fields pass through.
// dt must lie in (0, 0.01]; non-finite inputs throw std::invalid_argument.
RobotState cartpole_nonlinear_step(const RobotState& state, double wheel_force,
                                   double disturbance, double dt,
                                   const PhysicalParams& params);

// Kinetic plus potential energy (pole potential measured from the axle).
double cartpole_energy(const RobotState& state, const PhysicalParams& params);

inline Vec4 sagittal_vector(const RobotState& s) {
  return Vec4(s.x, s.theta, s.xdot, s.thetadot);
}

}  // namespace teleop
