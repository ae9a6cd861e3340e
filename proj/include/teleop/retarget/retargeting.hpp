#pragma once

#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"

#include <cmath>
#include <utility>
#include <variant>

namespace teleop {

struct MappingGains {
  double k_v = 3.0;   // pitch -> base velocity, m/s per rad
  double k_y = 1.5;   // yaw position scaling
  double k_m = 25.0;  // yaw -> yaw acceleration, rad/s^2 per rad
  void validate() const;
};

// HMI workspace limits applied when a pilot sample is ingested.
struct PilotLimits {
  double yaw_limit = M_PI / 3.0;  // |phi_H| bound, rad
  double pitch_limit = 0.35;      // |theta_H| bound, rad
};

struct RetargetConfig {
  MappingGains gains;
  PilotLimits limits;
  double blend_span = 0.070;           // s, P<->D manipulation crossfade
  double position_error_limit = 0.5;   // m, bound on x_R_des - x_R
};

// Clamps pitch and yaw to the HMI limits. Throws std::invalid_argument on
// non-finite fields.
PilotInput ingest_pilot_input(PilotInput in, const PilotLimits& limits);

struct ModeState {
  Mode mode_s = Mode::P;
  Mode mode_y = Mode::P;
  Mode mode_A = Mode::P;
  double x_R_des = 0.0;     // integrated base position target (sagittal P)
  double phi_offset = 0.0;  // yaw offset (yaw P)
  double alpha = 0.0;       // manipulation blend, 0 = joint PD, 1 = impedance
  PerArm<double> ik_q0{0.0, 0.0};  // last shoulder q0 per arm, held at singularities

  // Signed slope of alpha toward its target, 1/s.
  double alpha_rate(double blend_span) const;
};

// Sagittal P: track (x_des, xdot_des) with zero pitch and pitch rate.
struct VelocitySetpoint {
  double x_des = 0.0;
  double xdot_des = 0.0;
};
// Sagittal D: track the pilot's DCM; base position is not tracked.
struct DcmSetpoint {
  double xi_des = 0.0;
};
using SagittalSetpoint = std::variant<VelocitySetpoint, DcmSetpoint>;

struct YawPositionSetpoint {
  double phi_des = 0.0;
  double phidot_des = 0.0;
};
struct YawAccelerationSetpoint {
  double phiddot_des = 0.0;
};
using YawSetpoint = std::variant<YawPositionSetpoint, YawAccelerationSetpoint>;

// Both arm targets are carried because the crossfade needs the joint target
// and the impedance target at once; x_des is always FK(q_des).
struct ArmSetpoints {
  Mode mode = Mode::P;
  PerArm<Vec4> q_des{Vec4::Zero(), Vec4::Zero()};
  PerArm<Vec3> x_des{Vec3::Zero(), Vec3::Zero()};
  PerArm<bool> singular{false, false};
};

struct Setpoints {
  SagittalSetpoint sagittal;
  YawSetpoint yaw;
  ArmSetpoints arm;
};

// Hybrid sagittal mapping. In P the returned setpoint carries the current
// x_R_des and the state advances it by xdot_des * dt for the next tick; in D
// the integrator is frozen.
std::pair<SagittalSetpoint, ModeState> pi_s(const PilotInput& input, ModeState state,
                                            const MappingGains& gains,
                                            const PhysicalParams& params, double dt);

// D -> P resets x_R_des to the current base position. Same-mode is a no-op.
ModeState transition_sagittal(ModeState state, const RobotState& robot, Mode new_mode);

// Keeps |x_R_des - x_R| <= limit.
ModeState limit_position_error(ModeState state, double x_R, double limit);

std::pair<YawSetpoint, ModeState> pi_y(const PilotInput& input, ModeState state,
                                       const MappingGains& gains);

// D -> P sets phi_offset = phi_R - k_y * phi_H using the pre-transition pilot
// sample. Same-mode is a no-op.
ModeState transition_yaw(ModeState state, const RobotState& robot,
                         const PilotInput& previous_input, Mode new_mode,
                         const MappingGains& gains);

struct ArmModels {
  ArmModel human;
  PerArm<ArmModel> robot;  // mounted on the torso, indexed by Side

  static ArmModels from(const PhysicalParams& params);
};

// Hybrid arm mapping, evaluated independently for each arm.
std::pair<ArmSetpoints, ModeState> pi_A(const PilotInput& input, const ArmModels& models,
                                        ModeState state);

ModeState transition_arm(ModeState state, Mode new_mode);

// Moves alpha linearly toward 1 (arm mode D) or 0 (arm mode P) at 1/blend_span
// per second, clamped to [0, 1].
ModeState blend_step(ModeState state, double dt,
                     double blend_span = RetargetConfig{}.blend_span);

}  // namespace teleop
