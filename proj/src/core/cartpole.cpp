#include "teleop/core/cartpole.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

LinearModel cartpole_linear_dynamics(const PhysicalParams& params) {
  params.validate();
  const double M = params.cart_mass();
  const double m = params.pole_mass();
  const double l = params.h_R;
  const double g = params.g;

  LinearModel lin;
  lin.A(0, 2) = 1.0;
  lin.A(1, 3) = 1.0;
  lin.A(2, 1) = -m * g / M;
  lin.A(3, 1) = (M + m) * g / (M * l);
  lin.B(2) = 1.0 / M;
  lin.B(3) = -1.0 / (M * l);
  return lin;
}

double cartpole_pendular_frequency(const PhysicalParams& params) {
  const double M = params.cart_mass();
  const double m = params.pole_mass();
  return std::sqrt((M + m) * params.g / (M * params.h_R));
}

Vec4 cartpole_derivative(const Vec4& s, double wheel_force, double disturbance,
                         const PhysicalParams& params) {
  const double M = params.cart_mass();
  const double m = params.pole_mass();
  const double l = params.h_R;
  const double g = params.g;
  const double th = s[1];
  const double thd = s[3];
  const double c = std::cos(th);
  const double sn = std::sin(th);

  // [M+m   m l c ] [xdd ]   [F + Fd + m l s thd^2]
  // [m l c m l^2 ] [thdd] = [m g l s + Fd l c    ]
  const double rhs_x = wheel_force + disturbance + m * l * sn * thd * thd;
  const double rhs_th = m * g * l * sn + disturbance * l * c;
  const double det = m * l * l * (M + m * sn * sn);
  const double xdd = (m * l * l * rhs_x - m * l * c * rhs_th) / det;
  const double thdd = ((M + m) * rhs_th - m * l * c * rhs_x) / det;
  return Vec4(s[2], s[3], xdd, thdd);
}

RobotState cartpole_nonlinear_step(const RobotState& state, double wheel_force,
                                   double disturbance, double dt,
                                   const PhysicalParams& params) {
  if (!(dt > 0.0 && dt <= 0.01)) throw std::invalid_argument("cartpole step: dt outside (0, 0.01]");
  if (!state.finite() || !std::isfinite(wheel_force) || !std::isfinite(disturbance)) {
    throw std::invalid_argument("cartpole step: non-finite input");
  }
  const Vec4 s0 = sagittal_vector(state);
  const Vec4 k1 = cartpole_derivative(s0, wheel_force, disturbance, params);
  const Vec4 k2 = cartpole_derivative(s0 + 0.5 * dt * k1, wheel_force, disturbance, params);
  const Vec4 k3 = cartpole_derivative(s0 + 0.5 * dt * k2, wheel_force, disturbance, params);
  const Vec4 k4 = cartpole_derivative(s0 + dt * k3, wheel_force, disturbance, params);
  const Vec4 s1 = s0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  RobotState next = state;
  next.x = s1[0];
  next.theta = s1[1];
  next.xdot = s1[2];
  next.thetadot = s1[3];
  return next;
}

double cartpole_energy(const RobotState& s, const PhysicalParams& params) {
  const double M = params.cart_mass();
  const double m = params.pole_mass();
  const double l = params.h_R;
  const double c = std::cos(s.theta);
  const double kinetic = 0.5 * (M + m) * s.xdot * s.xdot + m * l * c * s.xdot * s.thetadot +
                         0.5 * m * l * l * s.thetadot * s.thetadot;
  return kinetic + m * params.g * l * c;
}

}  // namespace teleop
