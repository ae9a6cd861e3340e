#include "teleop/core/params.hpp"

#include "teleop/core/dcm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace teleop {

namespace {

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

bool RobotState::finite() const {
  if (!(std::isfinite(x) && std::isfinite(xdot) && std::isfinite(theta) &&
        std::isfinite(thetadot) && std::isfinite(phi) && std::isfinite(phidot))) {
    return false;
  }
  for (Side s : kSides) {
    if (!q[idx(s)].allFinite() || !qdot[idx(s)].allFinite()) return false;
  }
  return true;
}

bool PilotInput::finite() const {
  if (!(std::isfinite(theta_H) && std::isfinite(thetadot_H) && std::isfinite(phi_H) &&
        std::isfinite(phidot_H) && std::isfinite(M_zH) && std::isfinite(timestamp))) {
    return false;
  }
  return q_aH[0].allFinite() && q_aH[1].allFinite();
}

void ArmModel::validate() const {
  require_positive(upper_length, "arm upper_length");
  require_positive(fore_length, "arm fore_length");
  require_positive(upper_mass, "arm upper_mass");
  require_positive(fore_mass, "arm fore_mass");
  require_positive(link_radius, "arm link_radius");
  require_positive(armature, "arm armature");
  if (upper_com < 0.0 || upper_com > upper_length || fore_com < 0.0 || fore_com > fore_length) {
    throw std::invalid_argument("arm link CoM must lie on the link");
  }
  for (int i = 0; i < 4; ++i) {
    if (!(q_min[i] <= q_max[i])) throw std::invalid_argument("arm joint limits inverted");
  }
  const Mat3 RtR = shoulder_rotation.transpose() * shoulder_rotation;
  if (!RtR.isIdentity(1e-9) || shoulder_rotation.determinant() < 0.0) {
    throw std::invalid_argument("arm shoulder_rotation must be a rotation");
  }
}

ArmModel ArmModel::robot_default() { return ArmModel{}; }

ArmModel ArmModel::human_default() {
  ArmModel m;
  m.upper_length = 0.30;
  m.fore_length = 0.30;
  m.upper_mass = 2.0;
  m.fore_mass = 1.5;
  m.upper_com = 0.15;
  m.fore_com = 0.13;
  m.link_radius = 0.04;
  m.armature = 0.01;
  m.q_max[3] = 2.6;
  return m;
}

double PhysicalParams::omega_H() const { return natural_frequency(h_H, g); }
double PhysicalParams::omega_R() const { return natural_frequency(h_R, g); }

ArmModel PhysicalParams::mounted_arm(Side side) const {
  ArmModel m = robot_arm;
  m.shoulder_position = shoulder_mount;
  m.shoulder_position.y() = side == Side::Left ? std::abs(shoulder_mount.y())
                                               : -std::abs(shoulder_mount.y());
  return m;
}

void PhysicalParams::validate() const {
  require_positive(g, "g");
  require_positive(h_H, "h_H");
  require_positive(h_R, "h_R");
  require_positive(m_H, "m_H");
  require_positive(m_R, "m_R");
  require_positive(I_zH, "I_zH");
  require_positive(I_zR, "I_zR");
  require_positive(r_w, "r_w");
  require_positive(d, "d");
  require_positive(gamma_H, "gamma_H");
  require_positive(gamma_R, "gamma_R");
  if (!(pole_mass_fraction > 0.0 && pole_mass_fraction < 1.0)) {
    throw std::invalid_argument("pole_mass_fraction must lie in (0, 1)");
  }
  if (!shoulder_mount.allFinite()) throw std::invalid_argument("shoulder_mount not finite");
  robot_arm.validate();
  human_arm.validate();
}

}  // namespace teleop
