#include "teleop/retarget/retargeting.hpp"

#include "teleop/core/arm.hpp"
#include "teleop/core/dcm.hpp"

#include <algorithm>
#include <stdexcept>

namespace teleop {

void MappingGains::validate() const {
  if (!(k_v > 0.0 && k_y > 0.0 && k_m > 0.0)) {
    throw std::invalid_argument("mapping gains must be positive");
  }
}

PilotInput ingest_pilot_input(PilotInput in, const PilotLimits& limits) {
  if (!in.finite()) throw std::invalid_argument("pilot input has non-finite fields");
  in.phi_H = std::clamp(in.phi_H, -limits.yaw_limit, limits.yaw_limit);
  in.theta_H = std::clamp(in.theta_H, -limits.pitch_limit, limits.pitch_limit);
  return in;
}

double ModeState::alpha_rate(double blend_span) const {
  const double target = mode_A == Mode::D ? 1.0 : 0.0;
  if (alpha == target) return 0.0;
  return (target > alpha ? 1.0 : -1.0) / blend_span;
}

std::pair<SagittalSetpoint, ModeState> pi_s(const PilotInput& input, ModeState state,
                                            const MappingGains& gains,
                                            const PhysicalParams& params, double dt) {
  if (state.mode_s == Mode::P) {
    const double xdot_des = gains.k_v * input.theta_H;
    const VelocitySetpoint sp{state.x_R_des, xdot_des};
    state.x_R_des += xdot_des * dt;
    return {sp, state};
  }
  const double xi_H = dcm(input.theta_H, input.thetadot_H, params.omega_H()).xi;
  return {DcmSetpoint{xi_H}, state};
}

ModeState transition_sagittal(ModeState state, const RobotState& robot, Mode new_mode) {
  if (new_mode == state.mode_s) return state;
  if (state.mode_s == Mode::D && new_mode == Mode::P) state.x_R_des = robot.x;
  state.mode_s = new_mode;
  return state;
}

ModeState limit_position_error(ModeState state, double x_R, double limit) {
  state.x_R_des = std::clamp(state.x_R_des, x_R - limit, x_R + limit);
  return state;
}

std::pair<YawSetpoint, ModeState> pi_y(const PilotInput& input, ModeState state,
                                       const MappingGains& gains) {
  if (state.mode_y == Mode::P) {
    return {YawPositionSetpoint{gains.k_y * input.phi_H + state.phi_offset,
                                gains.k_y * input.phidot_H},
            state};
  }
  return {YawAccelerationSetpoint{gains.k_m * input.phi_H}, state};
}

ModeState transition_yaw(ModeState state, const RobotState& robot,
                         const PilotInput& previous_input, Mode new_mode,
                         const MappingGains& gains) {
  if (new_mode == state.mode_y) return state;
  if (state.mode_y == Mode::D && new_mode == Mode::P) {
    state.phi_offset = robot.phi - gains.k_y * previous_input.phi_H;
  }
  state.mode_y = new_mode;
  return state;
}

ArmModels ArmModels::from(const PhysicalParams& params) {
  return ArmModels{params.human_arm,
                   {params.mounted_arm(Side::Left), params.mounted_arm(Side::Right)}};
}

std::pair<ArmSetpoints, ModeState> pi_A(const PilotInput& input, const ArmModels& models,
                                        ModeState state) {
  ArmSetpoints sp;
  sp.mode = state.mode_A;
  for (Side side : kSides) {
    const std::size_t i = idx(side);
    const IkResult ik =
        arm_ik_spherical(input.q_aH[i], models.human, models.robot[i], state.ik_q0[i]);
    sp.q_des[i] = ik.q;
    sp.x_des[i] = arm_fk(ik.q, models.robot[i]);
    sp.singular[i] = ik.singular;
    state.ik_q0[i] = ik.q[0];
  }
  return {sp, state};
}

ModeState transition_arm(ModeState state, Mode new_mode) {
  state.mode_A = new_mode;
  return state;
}

ModeState blend_step(ModeState state, double dt, double blend_span) {
  if (!(dt > 0.0)) throw std::invalid_argument("blend_step: dt must be positive");
  const double target = state.mode_A == Mode::D ? 1.0 : 0.0;
  const double step = dt / blend_span;
  const double gap = target - state.alpha;
  // snap when within a rounding error of the target so 14 x 5 ms lands on 1
  if (std::abs(gap) <= step * (1.0 + 1e-9)) {
    state.alpha = target;
  } else {
    state.alpha += gap > 0.0 ? step : -step;
  }
  state.alpha = std::clamp(state.alpha, 0.0, 1.0);
  return state;
}

}  // namespace teleop
