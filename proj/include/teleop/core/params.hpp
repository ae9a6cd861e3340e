#pragma once

#include "teleop/core/types.hpp"

namespace teleop {

// Serial 4-DoF arm: a spherical shoulder (z-y-z axes) followed by an elbow
// pitch about the local y axis. Links run along the local z axis. The
// shoulder base frame is placed on the torso by `shoulder_position` and
// `shoulder_rotation`; with the default rotation (a half-turn about x) the
// zero pose hangs straight down.
struct ArmModel {
  double upper_length = 0.15;  // m
  double fore_length = 0.15;   // m

  Vec4 q_min{-M_PI, 0.0, -M_PI, 0.0};
  Vec4 q_max{M_PI, M_PI, M_PI, 2.6};

  double upper_mass = 0.25;  // kg
  double fore_mass = 0.20;   // kg
  double upper_com = 0.075;  // m from the shoulder along the link
  double fore_com = 0.075;   // m from the elbow along the link
  double link_radius = 0.02; // solid-rod inertia
  double armature = 0.002;   // reflected rotor inertia per joint, kg*m^2

  Vec3 shoulder_position = Vec3::Zero();
  Mat3 shoulder_rotation = (Mat3() << 1, 0, 0, 0, -1, 0, 0, 0, -1).finished();

  double reach() const { return upper_length + fore_length; }
  void validate() const;

  static ArmModel robot_default();
  static ArmModel human_default();
};

// Shared plant constants. Defaults are desk-scale; m_R = 12.5 kg follows
// from a 5 kg box being 40% of the robot mass.
struct PhysicalParams {
  double g = 9.81;
  double h_H = 1.0;   // human CoM height, m
  double h_R = 0.5;   // robot CoM height (pendulum length), m
  double m_H = 70.0;  // kg
  double m_R = 12.5;  // kg, cart + pole
  double pole_mass_fraction = 0.8;  // share of m_R carried by the body (pole)
  double I_zH = 0.3;  // kg*m^2
  double I_zR = 0.1;  // kg*m^2
  double r_w = 0.05;  // wheel radius, m
  double d = 0.3;     // wheel separation, m
  double gamma_H = 1.0;  // N
  double gamma_R = 1.0;  // N

  ArmModel robot_arm = ArmModel::robot_default();
  ArmModel human_arm = ArmModel::human_default();
  // Right shoulder on the torso (axle origin, torso frame); left mirrors y.
  Vec3 shoulder_mount{0.05, -0.12, 0.40};

  double pole_mass() const { return pole_mass_fraction * m_R; }
  double cart_mass() const { return (1.0 - pole_mass_fraction) * m_R; }
  double omega_H() const;
  double omega_R() const;

  // Robot arm model with its shoulder placed on the torso for `side`.
  ArmModel mounted_arm(Side side) const;

  void validate() const;
};

}  // namespace teleop
