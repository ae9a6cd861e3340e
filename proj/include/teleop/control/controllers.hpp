#pragma once

#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"
#include "teleop/retarget/retargeting.hpp"

namespace teleop {

struct ControllerGains {
  Vec4 lqr_Q_diag{10.0, 100.0, 1.0, 10.0};  // weights on [x theta xdot thetadot]
  double lqr_R = 1.0;  // weight on per-wheel torque, 1/(N*m)^2
  double dcm_pole = 3.0;  // 1/s, slow closed-loop pole of the DCM loop; must be < omega_R

  double kp_yaw = 2.0;  // N*m/rad
  double kd_yaw = 0.4;  // N*m*s/rad

  Vec4 K_p{20.0, 20.0, 20.0, 20.0};  // joint PD, N*m/rad
  Vec4 K_d{0.5, 0.5, 0.5, 0.5};      // N*m*s/rad
  Vec3 K_x{200.0, 200.0, 200.0};     // Cartesian stiffness, N/m
  Vec3 K_dx{10.0, 10.0, 10.0};       // Cartesian damping, N*s/m
  double epsilon = 0.15;             // null-space task scaling

  bool gravity_compensation = true;  // joint PD mode
  bool null_space_task = true;

  // Filled by synthesize().
  Vec4 K_vel = Vec4::Zero();
  double K_DCM = 0.0;

  void validate() const;
};

// Computes K_vel by LQR on the linearized cart-pole and K_DCM by placing the
// slow DCM pole. Throws SynthesisError.
ControllerGains synthesize(ControllerGains gains, const PhysicalParams& params);

// u = -K_vel [x - x_des, theta, xdot - xdot_des, thetadot]
double velocity_mode_control(const RobotState& robot, const VelocitySetpoint& sp,
                             const Vec4& K_vel);

// u = m_R g tan(xi_des) + K_DCM (xi_R - xi_des). The first term is the wheel
// force that holds a constant lean equal to xi_des. Uses only pitch states.
double dcm_mode_control(const RobotState& robot, double xi_des, double K_DCM,
                        const PhysicalParams& params);

double yaw_p_control(const RobotState& robot, const YawPositionSetpoint& sp,
                     const ControllerGains& gains);

// Wheel torque producing phiddot = k_m * phi_H on the differential drive.
double yaw_ff_torque(double phi_H, const MappingGains& mapping, const PhysicalParams& params);

Vec4 joint_pd_control(const Vec4& q, const Vec4& qdot, const Vec4& q_des,
                      const ControllerGains& gains);

struct NullSpaceProjector {
  Mat4 P = Mat4::Identity();
  bool damped = false;
};

// Dynamically consistent projector I - J'(J M^-1 J')^-1 J M^-1; damped near
// kinematic singularities.
NullSpaceProjector null_space_projector(const Vec4& q, const ArmModel& model);

inline constexpr double kProjectorDamping = 1e-6;     // lambda^2
inline constexpr double kSingularSigma = 1e-3;        // smallest singular value of J, m

struct ImpedanceResult {
  Vec4 tau = Vec4::Zero();
  Vec3 F_s = Vec3::Zero();  // virtual spring-damper force at the hand
  Vec4 tau_null = Vec4::Zero();
  bool damped = false;
};

// tau = J' F_s + G(q) + epsilon P(q) [K_p (q_des - q) - K_d qdot].
ImpedanceResult impedance_control(const Vec4& q, const Vec4& qdot, const Vec3& x_des,
                                  const Vec4& q_des, const ArmModel& model,
                                  const ControllerGains& gains, double g = 9.81);

Vec4 blend_torque(const Vec4& tau_P, const Vec4& tau_D, double alpha);

struct ArmTorque {
  Vec4 tau = Vec4::Zero();
  Vec4 tau_P = Vec4::Zero();
  Vec4 tau_D = Vec4::Zero();
  bool damped = false;
};

// Joint PD (plus gravity compensation) crossfaded with impedance by alpha.
ArmTorque arm_control(const Vec4& q, const Vec4& qdot, const Vec4& q_des, const Vec3& x_des,
                      double alpha, const ArmModel& model, const ControllerGains& gains,
                      double g = 9.81);

struct ActuatorLimits {
  double wheel_force = 40.0;  // N
  double yaw_torque = 2.0;    // N*m
  double joint_torque = 8.0;  // N*m
};

struct SaturationFlags {
  bool wheel = false;
  bool yaw = false;
  PerArm<bool> arm{false, false};
  bool any() const { return wheel || yaw || arm[0] || arm[1]; }
};

struct TorqueCommand {
  double wheel_force = 0.0;
  double tau_y = 0.0;
  PerArm<Vec4> tau_arm{Vec4::Zero(), Vec4::Zero()};
  SaturationFlags saturated;
};

TorqueCommand saturate(TorqueCommand cmd, const ActuatorLimits& limits);

struct ControlOutput {
  TorqueCommand command;
  PerArm<ArmTorque> arm;
};

// All channels for one control tick; the result is saturated.
ControlOutput compute_control(const RobotState& robot, const Setpoints& sp,
                              const PilotInput& input, const ModeState& modes,
                              const PhysicalParams& params, const MappingGains& mapping,
                              const ControllerGains& gains, const ActuatorLimits& limits);

}  // namespace teleop
