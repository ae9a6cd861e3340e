#pragma once

#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"

namespace teleop {

// Differential-drive yaw: I_zR * phiddot = (d / r_w) * tau_y + M_ext.
double yaw_acceleration(double tau_y, double M_ext, const PhysicalParams& params);

// Yaw moment produced on the body by a differential wheel torque.
double yaw_wheel_moment(double tau_y, const PhysicalParams& params);

// Advances phi/phidot over dt with the torque held constant (exact for a
// constant acceleration). dt must lie in (0, 0.01].
RobotState yaw_diffdrive_dynamics(const RobotState& state, double tau_y,
                                  double M_ext, const PhysicalParams& params,
                                  double dt);

}  // namespace teleop
