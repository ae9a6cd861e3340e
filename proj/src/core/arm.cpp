#include "teleop/core/arm.hpp"

#include <algorithm>
#include <cmath>

namespace teleop {

namespace {

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

// Rod inertia about its CoM in the link frame (axis along z).
Mat3 rod_inertia(double mass, double length, double radius) {
  const double transverse = mass * (3.0 * radius * radius + length * length) / 12.0;
  const double axial = 0.5 * mass * radius * radius;
  return Eigen::Vector3d(transverse, transverse, axial).asDiagonal();
}

// Per-link quantities used by the mass matrix and Coriolis terms.
struct LinkJacobians {
  Mat34 Jv = Mat34::Zero();
  Mat34 Jw = Mat34::Zero();
  Mat3 inertia_world = Mat3::Zero();
  double mass = 0.0;
};

std::array<LinkJacobians, 2> link_jacobians(const ArmKinematics& k, const ArmModel& model) {
  std::array<LinkJacobians, 2> out;
  // upper arm: joints 0..2
  out[0].mass = model.upper_mass;
  for (int j = 0; j < 3; ++j) {
    out[0].Jv.col(j) = k.axis[j].cross(k.upper_com - k.origin[j]);
    out[0].Jw.col(j) = k.axis[j];
  }
  const Mat3 Iu = rod_inertia(model.upper_mass, model.upper_length, model.link_radius);
  out[0].inertia_world = k.upper_rotation * Iu * k.upper_rotation.transpose();

  // forearm: joints 0..3
  out[1].mass = model.fore_mass;
  for (int j = 0; j < 4; ++j) {
    out[1].Jv.col(j) = k.axis[j].cross(k.fore_com - k.origin[j]);
    out[1].Jw.col(j) = k.axis[j];
  }
  const Mat3 If = rod_inertia(model.fore_mass, model.fore_length, model.link_radius);
  out[1].inertia_world = k.fore_rotation * If * k.fore_rotation.transpose();
  return out;
}

double wrap_angle(double a) { return std::atan2(std::sin(a), std::cos(a)); }

}  // namespace

ArmKinematics arm_kinematics(const Vec4& q, const ArmModel& model) {
  ArmKinematics k;
  const Mat3& Rs = model.shoulder_rotation;
  const Vec3& ps = model.shoulder_position;
  const Mat3 R0 = Rs * rot_z(q[0]);
  const Mat3 R01 = R0 * rot_y(q[1]);
  const Mat3 R012 = R01 * rot_z(q[2]);
  const Mat3 R0123 = R012 * rot_y(q[3]);

  k.axis[0] = Rs.col(2);
  k.axis[1] = R0.col(1);
  k.axis[2] = R01.col(2);
  k.axis[3] = R012.col(1);
  k.origin[0] = ps;
  k.origin[1] = ps;
  k.origin[2] = ps;
  k.elbow = ps + model.upper_length * R012.col(2);
  k.origin[3] = k.elbow;
  k.hand = k.elbow + model.fore_length * R0123.col(2);
  k.upper_rotation = R012;
  k.fore_rotation = R0123;
  k.upper_com = ps + model.upper_com * R012.col(2);
  k.fore_com = k.elbow + model.fore_com * R0123.col(2);
  return k;
}

Vec3 arm_fk(const Vec4& q, const ArmModel& model) { return arm_kinematics(q, model).hand; }

Vec3 arm_elbow_direction(const Vec4& q, const ArmModel& model) {
  return arm_kinematics(q, model).upper_rotation.col(2);
}

Mat34 arm_jacobian(const Vec4& q, const ArmModel& model) {
  const ArmKinematics k = arm_kinematics(q, model);
  Mat34 J;
  for (int j = 0; j < 4; ++j) J.col(j) = k.axis[j].cross(k.hand - k.origin[j]);
  return J;
}

Mat4 arm_mass_matrix(const Vec4& q, const ArmModel& model) {
  const ArmKinematics k = arm_kinematics(q, model);
  Mat4 M = model.armature * Mat4::Identity();
  for (const auto& link : link_jacobians(k, model)) {
    M += link.mass * link.Jv.transpose() * link.Jv;
    M += link.Jw.transpose() * link.inertia_world * link.Jw;
  }
  return M;
}

Mat4 arm_coriolis_matrix(const Vec4& q, const Vec4& qdot, const ArmModel& model) {
  const ArmKinematics k = arm_kinematics(q, model);
  const auto links = link_jacobians(k, model);

  // Axis rates: axis j is fixed in the body before joint j.
  std::array<Vec3, 4> axis_rate;
  Vec3 omega = Vec3::Zero();
  for (int j = 0; j < 4; ++j) {
    axis_rate[j] = omega.cross(k.axis[j]);
    omega += k.axis[j] * qdot[j];
  }
  std::array<Vec3, 4> origin_rate;
  origin_rate[0] = origin_rate[1] = origin_rate[2] = Vec3::Zero();
  origin_rate[3] = Vec3::Zero();
  for (int j = 0; j < 3; ++j) origin_rate[3] += k.axis[j].cross(k.elbow - k.origin[j]) * qdot[j];

  Mat4 C = Mat4::Zero();
  const std::array<int, 2> joints_in_link{3, 4};
  const std::array<Vec3, 2> com{k.upper_com, k.fore_com};
  for (std::size_t i = 0; i < 2; ++i) {
    const LinkJacobians& link = links[i];
    const Vec3 com_rate = link.Jv * qdot;
    const Vec3 link_omega = link.Jw * qdot;
    Mat34 Jv_dot = Mat34::Zero();
    Mat34 Jw_dot = Mat34::Zero();
    for (int j = 0; j < joints_in_link[i]; ++j) {
      Jv_dot.col(j) = axis_rate[j].cross(com[i] - k.origin[j]) +
                      k.axis[j].cross(com_rate - origin_rate[j]);
      Jw_dot.col(j) = axis_rate[j];
    }
    C += link.mass * link.Jv.transpose() * Jv_dot;
    C += link.Jw.transpose() * link.inertia_world * Jw_dot;
    C += link.Jw.transpose() * skew(link_omega) * link.inertia_world * link.Jw;
  }
  return C;
}

Vec4 arm_gravity(const Vec4& q, const ArmModel& model, double g) {
  const ArmKinematics k = arm_kinematics(q, model);
  Vec4 G = Vec4::Zero();
  for (const auto& link : link_jacobians(k, model)) {
    G += link.mass * g * link.Jv.row(2).transpose();
  }
  return G;
}

ArmDynamics arm_dynamics_terms(const Vec4& q, const Vec4& qdot, const ArmModel& model,
                               double g) {
  ArmDynamics dyn;
  dyn.M = arm_mass_matrix(q, model);
  dyn.C = arm_coriolis_matrix(q, qdot, model) * qdot;
  dyn.G = arm_gravity(q, model, g);
  return dyn;
}

double arm_potential_energy(const Vec4& q, const ArmModel& model, double g) {
  const ArmKinematics k = arm_kinematics(q, model);
  return g * (model.upper_mass * k.upper_com.z() + model.fore_mass * k.fore_com.z());
}

double arm_kinetic_energy(const Vec4& q, const Vec4& qdot, const ArmModel& model) {
  return 0.5 * qdot.dot(arm_mass_matrix(q, model) * qdot);
}

Vec4 arm_forward_dynamics(const Vec4& q, const Vec4& qdot, const Vec4& tau,
                          const ArmModel& model, double g) {
  const ArmDynamics dyn = arm_dynamics_terms(q, qdot, model, g);
  return dyn.M.ldlt().solve(tau - dyn.C - dyn.G);
}

ArmJointState arm_rk4_step(const ArmJointState& s, const Vec4& tau, const ArmModel& model,
                           double dt, double g) {
  auto accel = [&](const Vec4& q, const Vec4& qd) {
    return arm_forward_dynamics(q, qd, tau, model, g);
  };
  const Vec4 a1 = accel(s.q, s.qdot);
  const Vec4 v2 = s.qdot + 0.5 * dt * a1;
  const Vec4 a2 = accel(s.q + 0.5 * dt * s.qdot, v2);
  const Vec4 v3 = s.qdot + 0.5 * dt * a2;
  const Vec4 a3 = accel(s.q + 0.5 * dt * v2, v3);
  const Vec4 v4 = s.qdot + dt * a3;
  const Vec4 a4 = accel(s.q + dt * v3, v4);
  ArmJointState next;
  next.q = s.q + (dt / 6.0) * (s.qdot + 2.0 * v2 + 2.0 * v3 + v4);
  next.qdot = s.qdot + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  return next;
}

Vec4 clamp_to_limits(const Vec4& q, const ArmModel& model) {
  return q.cwiseMax(model.q_min).cwiseMin(model.q_max);
}

IkResult arm_ik_spherical(const Vec4& q_human, const ArmModel& human, const ArmModel& robot,
                          double previous_q0) {
  const ArmKinematics hk = arm_kinematics(q_human, human);
  const Vec3 z_h = hk.upper_rotation.col(2);
  const Vec3 y_h = hk.upper_rotation.col(1);
  const Vec3 forearm = (hk.hand - hk.elbow).normalized();

  // Express in the robot shoulder base frame; keep z, project y onto z's normal plane.
  const Mat3 base_T = robot.shoulder_rotation.transpose();
  const Vec3 z = (base_T * z_h).normalized();
  Vec3 y = base_T * y_h;
  y = (y - y.dot(z) * z).normalized();
  const Vec3 x = y.cross(z);
  Mat3 R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;

  IkResult out;
  const double r33 = std::clamp(R(2, 2), -1.0, 1.0);
  const double s1 = std::sqrt(std::max(0.0, 1.0 - r33 * r33));
  const double q1 = std::atan2(s1, r33);
  double q0 = 0.0;
  double q2 = 0.0;
  if (q1 < kShoulderSingularCone || q1 > M_PI - kShoulderSingularCone) {
    out.singular = true;
    q0 = previous_q0;
    if (r33 > 0.0) {
      // R ~ Rz(q0 + q2)
      q2 = wrap_angle(std::atan2(R(1, 0), R(0, 0)) - q0);
    } else {
      // R ~ Rz(q0) Ry(pi) Rz(q2) has r11 = -cos(q0 - q2), r21 = -sin(q0 - q2)
      q2 = wrap_angle(q0 - std::atan2(-R(1, 0), -R(0, 0)));
    }
  } else {
    q0 = std::atan2(R(1, 2), R(0, 2));
    q2 = std::atan2(R(2, 1), -R(2, 0));
  }
  const double q3 = std::acos(std::clamp(z_h.dot(forearm), -1.0, 1.0));

  const Vec4 raw(q0, q1, q2, q3);
  out.q = clamp_to_limits(raw, robot);
  out.clamped = (out.q - raw).cwiseAbs().maxCoeff() > 0.0;
  return out;
}

}  // namespace teleop
