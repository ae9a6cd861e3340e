#pragma once

#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"

namespace teleop {

// Joint axes, joint origins and link frames of one arm, all expressed in the
// torso frame.
struct ArmKinematics {
  std::array<Vec3, 4> axis;
  std::array<Vec3, 4> origin;
  Mat3 upper_rotation;  // shoulder link frame (after the three shoulder joints)
  Mat3 fore_rotation;   // forearm frame (after the elbow)
  Vec3 elbow;
  Vec3 hand;
  Vec3 upper_com;
  Vec3 fore_com;
};

ArmKinematics arm_kinematics(const Vec4& q, const ArmModel& model);

// Hand position in the torso frame.
Vec3 arm_fk(const Vec4& q, const ArmModel& model);

// Unit vector from shoulder to elbow, torso frame.
Vec3 arm_elbow_direction(const Vec4& q, const ArmModel& model);

// d(arm_fk)/dq.
Mat34 arm_jacobian(const Vec4& q, const ArmModel& model);

struct ArmDynamics {
  Mat4 M = Mat4::Zero();  // mass matrix
  Vec4 C = Vec4::Zero();  // Coriolis/centrifugal torque, C(q, qdot) * qdot
  Vec4 G = Vec4::Zero();  // gravity torque, dV/dq
};

ArmDynamics arm_dynamics_terms(const Vec4& q, const Vec4& qdot,
                               const ArmModel& model, double g = 9.81);

Mat4 arm_mass_matrix(const Vec4& q, const ArmModel& model);

// Coriolis matrix in the factorization where Mdot - 2C is skew-symmetric.
Mat4 arm_coriolis_matrix(const Vec4& q, const Vec4& qdot, const ArmModel& model);

Vec4 arm_gravity(const Vec4& q, const ArmModel& model, double g = 9.81);

double arm_potential_energy(const Vec4& q, const ArmModel& model, double g = 9.81);
double arm_kinetic_energy(const Vec4& q, const Vec4& qdot, const ArmModel& model);

// qddot = M^-1 (tau - C qdot - G).
Vec4 arm_forward_dynamics(const Vec4& q, const Vec4& qdot, const Vec4& tau,
                          const ArmModel& model, double g = 9.81);

struct ArmJointState {
  Vec4 q = Vec4::Zero();
  Vec4 qdot = Vec4::Zero();
};

// Classical RK4 with tau held over the step.
ArmJointState arm_rk4_step(const ArmJointState& s, const Vec4& tau, const ArmModel& model,
                           double dt, double g = 9.81);

Vec4 clamp_to_limits(const Vec4& q, const ArmModel& model);

struct IkResult {
  Vec4 q = Vec4::Zero();
  bool singular = false;  // elbow direction inside the shoulder's singular cone
  bool clamped = false;   // at least one joint hit a robot joint limit
};

// Half-angle of the cone around the shoulder base z axis where q0 is held.
inline constexpr double kShoulderSingularCone = 1e-3;

// Human-to-robot retargeting through the spherical shoulder. The robot's
// shoulder-to-elbow direction copies the human's, the second shoulder axis is
// the human's projected onto the plane normal to it, and the elbow angle is
// the angle between the human upper arm and forearm. `previous_q0` is used
// when the pose is singular.
IkResult arm_ik_spherical(const Vec4& q_human, const ArmModel& human,
                          const ArmModel& robot, double previous_q0 = 0.0);

}  // namespace teleop
