#include "teleop/control/controllers.hpp"

#include "teleop/control/care.hpp"
#include "teleop/core/arm.hpp"
#include "teleop/core/cartpole.hpp"
#include "teleop/core/dcm.hpp"

#include <algorithm>
#include <stdexcept>

namespace teleop {

void ControllerGains::validate() const {
  if ((lqr_Q_diag.array() < 0.0).any() || !(lqr_R > 0.0)) {
    throw std::invalid_argument("LQR weights: Q must be PSD and R positive");
  }
  if (!(dcm_pole > 0.0)) throw std::invalid_argument("dcm_pole must be positive");
  if (kp_yaw < 0.0 || kd_yaw < 0.0) throw std::invalid_argument("yaw gains must be >= 0");
  if ((K_p.array() < 0.0).any() || (K_d.array() < 0.0).any() || (K_x.array() < 0.0).any() ||
      (K_dx.array() < 0.0).any()) {
    throw std::invalid_argument("arm gains must be non-negative");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0,1]");
}

ControllerGains synthesize(ControllerGains gains, const PhysicalParams& params) {
  gains.validate();
  const LinearModel lin = cartpole_linear_dynamics(params);
  const Eigen::MatrixXd Q = gains.lqr_Q_diag.asDiagonal();
  const Eigen::MatrixXd R = Eigen::MatrixXd::Constant(1, 1, gains.lqr_R);
  // R weighs the per-wheel torque; both wheels push, so the force is 2 tau / r_w.
  const Eigen::MatrixXd B_torque = lin.B * (2.0 / params.r_w);
  const CareSolution care = solve_care(lin.A, B_torque, Q, R);
  gains.K_vel = care.K.row(0).transpose() * (2.0 / params.r_w);

  // Pitch loop thetaddot = w'^2 theta - b u with u = K (theta + thetadot/w_R):
  // s^2 + (bK/w_R) s + (bK - w'^2). Place one root at -dcm_pole.
  const double w_R = params.omega_R();
  const double w2 = std::pow(cartpole_pendular_frequency(params), 2);
  const double b = -lin.B[3];
  const double p = gains.dcm_pole;
  if (p >= w_R) {
    throw SynthesisError("dcm_pole must be slower than the robot's natural frequency");
  }
  gains.K_DCM = (w2 - p * p) / ((1.0 - p / w_R) * b);
  return gains;
}

double velocity_mode_control(const RobotState& robot, const VelocitySetpoint& sp,
                             const Vec4& K_vel) {
  const Vec4 err(robot.x - sp.x_des, robot.theta, robot.xdot - sp.xdot_des, robot.thetadot);
  return -K_vel.dot(err);
}

double dcm_mode_control(const RobotState& robot, double xi_des, double K_DCM,
                        const PhysicalParams& params) {
  const double xi_R = dcm(robot.theta, robot.thetadot, params.omega_R()).xi;
  return params.m_R * params.g * std::tan(xi_des) + K_DCM * (xi_R - xi_des);
}

double yaw_p_control(const RobotState& robot, const YawPositionSetpoint& sp,
                     const ControllerGains& gains) {
  return gains.kp_yaw * (sp.phi_des - robot.phi) + gains.kd_yaw * (sp.phidot_des - robot.phidot);
}

double yaw_ff_torque(double phi_H, const MappingGains& mapping, const PhysicalParams& params) {
  return (params.r_w * params.I_zR / params.d) * mapping.k_m * phi_H;
}

Vec4 joint_pd_control(const Vec4& q, const Vec4& qdot, const Vec4& q_des,
                      const ControllerGains& gains) {
  return gains.K_p.cwiseProduct(q_des - q) - gains.K_d.cwiseProduct(qdot);
}

NullSpaceProjector null_space_projector(const Vec4& q, const ArmModel& model) {
  const Mat34 J = arm_jacobian(q, model);
  const Mat4 M = arm_mass_matrix(q, model);
  const Eigen::Matrix<double, 4, 3> MinvJt = M.ldlt().solve(J.transpose());
  Mat3 lambda_inv = J * MinvJt;
  NullSpaceProjector out;
  const double sigma_min = std::sqrt(std::max(
      0.0, Eigen::SelfAdjointEigenSolver<Mat3>(J * J.transpose()).eigenvalues()[0]));
  if (sigma_min < kSingularSigma) {
    lambda_inv += kProjectorDamping * Mat3::Identity();
    out.damped = true;
  }
  const Mat3 lambda = lambda_inv.ldlt().solve(Mat3::Identity());
  out.P = Mat4::Identity() - J.transpose() * lambda * MinvJt.transpose();
  return out;
}

ImpedanceResult impedance_control(const Vec4& q, const Vec4& qdot, const Vec3& x_des,
                                  const Vec4& q_des, const ArmModel& model,
                                  const ControllerGains& gains, double g) {
  const Mat34 J = arm_jacobian(q, model);
  const Vec3 x = arm_fk(q, model);
  const Vec3 xdot = J * qdot;
  ImpedanceResult out;
  out.F_s = gains.K_x.cwiseProduct(x_des - x) - gains.K_dx.cwiseProduct(xdot);
  out.tau = J.transpose() * out.F_s + arm_gravity(q, model, g);
  if (gains.null_space_task && gains.epsilon > 0.0) {
    const NullSpaceProjector ns = null_space_projector(q, model);
    out.tau_null = gains.epsilon * ns.P * joint_pd_control(q, qdot, q_des, gains);
    out.damped = ns.damped;
    out.tau += out.tau_null;
  }
  return out;
}

Vec4 blend_torque(const Vec4& tau_P, const Vec4& tau_D, double alpha) {
  return (1.0 - alpha) * tau_P + alpha * tau_D;
}

ArmTorque arm_control(const Vec4& q, const Vec4& qdot, const Vec4& q_des, const Vec3& x_des,
                      double alpha, const ArmModel& model, const ControllerGains& gains,
                      double g) {
  ArmTorque out;
  out.tau_P = joint_pd_control(q, qdot, q_des, gains);
  if (gains.gravity_compensation) out.tau_P += arm_gravity(q, model, g);
  const ImpedanceResult imp = impedance_control(q, qdot, x_des, q_des, model, gains, g);
  out.tau_D = imp.tau;
  out.damped = imp.damped;
  out.tau = blend_torque(out.tau_P, out.tau_D, alpha);
  return out;
}

TorqueCommand saturate(TorqueCommand cmd, const ActuatorLimits& limits) {
  auto clip = [](double v, double lim, bool& flag) {
    if (v > lim) {
      flag = true;
      return lim;
    }
    if (v < -lim) {
      flag = true;
      return -lim;
    }
    return v;
  };
  cmd.wheel_force = clip(cmd.wheel_force, limits.wheel_force, cmd.saturated.wheel);
  cmd.tau_y = clip(cmd.tau_y, limits.yaw_torque, cmd.saturated.yaw);
  for (std::size_t i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      cmd.tau_arm[i][j] = clip(cmd.tau_arm[i][j], limits.joint_torque, cmd.saturated.arm[i]);
    }
  }
  return cmd;
}

ControlOutput compute_control(const RobotState& robot, const Setpoints& sp,
                              const PilotInput& input, const ModeState& modes,
                              const PhysicalParams& params, const MappingGains& mapping,
                              const ControllerGains& gains, const ActuatorLimits& limits) {
  ControlOutput out;
  TorqueCommand cmd;
  if (const auto* v = std::get_if<VelocitySetpoint>(&sp.sagittal)) {
    cmd.wheel_force = velocity_mode_control(robot, *v, gains.K_vel);
  } else {
    cmd.wheel_force =
        dcm_mode_control(robot, std::get<DcmSetpoint>(sp.sagittal).xi_des, gains.K_DCM, params);
  }
  if (const auto* y = std::get_if<YawPositionSetpoint>(&sp.yaw)) {
    cmd.tau_y = yaw_p_control(robot, *y, gains);
  } else {
    cmd.tau_y = yaw_ff_torque(input.phi_H, mapping, params);
  }
  for (Side s : kSides) {
    const std::size_t i = idx(s);
    out.arm[i] = arm_control(robot.q[i], robot.qdot[i], sp.arm.q_des[i], sp.arm.x_des[i],
                             modes.alpha, params.mounted_arm(s), gains, params.g);
    cmd.tau_arm[i] = out.arm[i].tau;
  }
  out.command = saturate(cmd, limits);
  return out;
}

}  // namespace teleop
