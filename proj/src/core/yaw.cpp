#include "teleop/core/yaw.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

double yaw_wheel_moment(double tau_y, const PhysicalParams& params) {
  // wheel force F_R = tau_y / r_w acting on the lever d
  return params.d * (tau_y / params.r_w);
}

double yaw_acceleration(double tau_y, double M_ext, const PhysicalParams& params) {
  return (yaw_wheel_moment(tau_y, params) + M_ext) / params.I_zR;
}

RobotState yaw_diffdrive_dynamics(const RobotState& state, double tau_y, double M_ext,
                                  const PhysicalParams& params, double dt) {
  if (!(dt > 0.0 && dt <= 0.01)) throw std::invalid_argument("yaw step: dt outside (0, 0.01]");
  if (!std::isfinite(tau_y) || !std::isfinite(M_ext) || !std::isfinite(state.phi) ||
      !std::isfinite(state.phidot)) {
    throw std::invalid_argument("yaw step: non-finite input");
  }
  const double acc = yaw_acceleration(tau_y, M_ext, params);
  RobotState next = state;
  next.phi = state.phi + state.phidot * dt + 0.5 * acc * dt * dt;
  next.phidot = state.phidot + acc * dt;
  return next;
}

}  // namespace teleop
