#include "teleop/sim/world.hpp"

#include "teleop/core/arm.hpp"
#include "teleop/core/cartpole.hpp"
#include "teleop/core/yaw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teleop {

namespace {

constexpr int kDim = 24;
using StateVec = Eigen::Matrix<double, kDim, 1>;

// [x theta xdot thetadot phi phidot X Y | q_L qdot_L | q_R qdot_R]
StateVec pack(const RobotState& r, double X, double Y) {
  StateVec s;
  s << r.x, r.theta, r.xdot, r.thetadot, r.phi, r.phidot, X, Y, r.q[0], r.qdot[0], r.q[1],
      r.qdot[1];
  return s;
}

void unpack(const StateVec& s, RobotState& r, double& X, double& Y) {
  r.x = s[0];
  r.theta = s[1];
  r.xdot = s[2];
  r.thetadot = s[3];
  r.phi = s[4];
  r.phidot = s[5];
  X = s[6];
  Y = s[7];
  r.q[0] = s.segment<4>(8);
  r.qdot[0] = s.segment<4>(12);
  r.q[1] = s.segment<4>(16);
  r.qdot[1] = s.segment<4>(20);
}

Vec3 planar_point(const Pose2& pose, const Vec3& local) {
  const double c = std::cos(pose.z()), s = std::sin(pose.z());
  return Vec3(pose.x() + c * local.x() - s * local.y(), pose.y() + s * local.x() + c * local.y(),
              local.z());
}

// Velocity of a material point at world position p of a planar body.
Vec3 planar_point_velocity(const Pose2& pose, const Pose2& vel, const Vec3& p) {
  return Vec3(vel.x() - vel.z() * (p.y() - pose.y()), vel.y() + vel.z() * (p.x() - pose.x()), 0.0);
}

struct HandKinematics {
  Vec3 p;
  Vec3 v;
  Mat34 J_world;
  Mat3 R;
  Mat34 J;
};

HandKinematics hand_kinematics(const StateVec& s, std::size_t i, const ArmModel& arm) {
  const double theta = s[1], phi = s[4];
  const Vec4 q = s.segment<4>(8 + 8 * i);
  const Vec4 qd = s.segment<4>(12 + 8 * i);
  HandKinematics h;
  h.R = torso_rotation(theta, phi);
  const Vec3 p_t = arm_fk(q, arm);
  h.J = arm_jacobian(q, arm);
  h.J_world = h.R * h.J;
  const Vec3 arm_vec = h.R * p_t;
  h.p = Vec3(s[6], s[7], 0.0) + arm_vec;
  const Vec3 omega = Vec3(0, 0, s[5]) + Eigen::AngleAxisd(phi, Vec3::UnitZ()) * Vec3(0, s[3], 0);
  h.v = Vec3(s[2] * std::cos(phi), s[2] * std::sin(phi), 0.0) + omega.cross(arm_vec) +
        h.J_world * qd;
  return h;
}

struct Environment {
  const World& w;
  const PerArm<ArmModel>& arms;
  const TorqueCommand& cmd;
};

struct Derivative {
  StateVec ds;
  PerArm<Vec3> box_force{Vec3::Zero(), Vec3::Zero()};
  PerArm<Vec3> latch_force{Vec3::Zero(), Vec3::Zero()};
};

Vec3 latch_force(const SharedObject& obj, std::size_t i, const Vec3& p, const Vec3& v) {
  const Vec3 grip = planar_point(obj.pose, obj.robot_grip[i]);
  const Vec3 grip_v = planar_point_velocity(obj.pose, obj.velocity, grip);
  return obj.latch_k * (grip - p) + obj.latch_b * (grip_v - v);
}

Derivative derivative(const StateVec& s, const Environment& env) {
  const World& w = env.w;
  Derivative out;
  out.ds.setZero();
  double F_d = 0.0, M_z = 0.0;
  const double phi = s[4];
  const Vec3 heading_x(std::cos(phi), std::sin(phi), 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    const HandKinematics h = hand_kinematics(s, i, env.arms[i]);
    if (w.box.enabled) out.box_force[i] = box_contact(h.p, h.v, w.box, w.anchor[i], w.contact).force;
    if (w.object.enabled) out.latch_force[i] = latch_force(w.object, i, h.p, h.v);
    const Vec3 F = out.box_force[i] + out.latch_force[i];
    F_d += heading_x.dot(F);
    M_z += (h.p.x() - s[6]) * F.y() - (h.p.y() - s[7]) * F.x();

    const Vec4 q = s.segment<4>(8 + 8 * i);
    const Vec4 qd = s.segment<4>(12 + 8 * i);
    const Vec4 tau = env.cmd.tau_arm[i] + h.J_world.transpose() * F;
    out.ds.segment<4>(8 + 8 * i) = qd;
    out.ds.segment<4>(12 + 8 * i) = arm_forward_dynamics(q, qd, tau, env.arms[i], w.params.g);
  }
  const Vec4 sag = cartpole_derivative(s.segment<4>(0), env.cmd.wheel_force, F_d, w.params);
  out.ds[0] = sag[0];
  out.ds[1] = sag[1];
  out.ds[2] = sag[2];
  out.ds[3] = sag[3];
  out.ds[4] = s[5];
  out.ds[5] = yaw_acceleration(env.cmd.tau_y, M_z, w.params);
  out.ds[6] = s[2] * std::cos(phi);
  out.ds[7] = s[2] * std::sin(phi);
  return out;
}

bool finite_command(const TorqueCommand& c) {
  return std::isfinite(c.wheel_force) && std::isfinite(c.tau_y) && c.tau_arm[0].allFinite() &&
         c.tau_arm[1].allFinite();
}

// Face frame of the box: outward normal and tangent in box coordinates.
void face_axes(int face, double& nx, double& ny, double& tx, double& ty) {
  switch (face) {
    case 0: nx = 1; ny = 0; tx = 0; ty = 1; break;
    case 1: nx = -1; ny = 0; tx = 0; ty = 1; break;
    case 2: nx = 0; ny = 1; tx = 1; ty = 0; break;
    default: nx = 0; ny = -1; tx = 1; ty = 0; break;
  }
}

struct FaceSample {
  bool inside = false;
  int face = -1;
  double depth = 0.0;
  double s = 0.0;
  Vec3 n = Vec3::Zero();  // world, outward
  Vec3 t = Vec3::Zero();  // world, horizontal tangent
};

FaceSample sample_face(const Vec3& hand, const BoxBody& box, int preferred) {
  FaceSample f;
  const double c = std::cos(box.pose.z()), sn = std::sin(box.pose.z());
  const double dx = hand.x() - box.pose.x(), dy = hand.y() - box.pose.y();
  const double bx = c * dx + sn * dy;
  const double by = -sn * dx + c * dy;
  if (!(std::abs(bx) < box.half_x && std::abs(by) < box.half_y)) return f;
  f.inside = true;
  const double depth[4] = {box.half_x - bx, box.half_x + bx, box.half_y - by, box.half_y + by};
  int face = preferred;
  if (face < 0) {
    face = 0;
    for (int k = 1; k < 4; ++k) {
      if (depth[k] < depth[face]) face = k;
    }
  }
  f.face = face;
  f.depth = depth[face];
  f.s = face < 2 ? by : bx;
  double nx, ny, tx, ty;
  face_axes(face, nx, ny, tx, ty);
  f.n = Vec3(c * nx - sn * ny, sn * nx + c * ny, 0.0);
  f.t = Vec3(c * tx - sn * ty, sn * tx + c * ty, 0.0);
  return f;
}

}  // namespace

void ContactParams::validate() const {
  if (!(k_n > 0 && b_n >= 0 && k_t > 0 && b_t >= 0 && mu_hand >= 0)) {
    throw std::invalid_argument("contact parameters out of range");
  }
  if (substeps < 1) throw std::invalid_argument("contact substeps must be >= 1");
}

double BoxBody::inertia() const {
  return mass * (4.0 * half_x * half_x + 4.0 * half_y * half_y) / 12.0;
}

void BoxBody::validate() const {
  if (!(mass > 0 && half_x > 0 && half_y > 0)) throw std::invalid_argument("box geometry/mass");
  if (!(mu_s >= 0 && mu_k >= 0 && mu_k <= mu_s)) {
    throw std::invalid_argument("box friction requires 0 <= mu_k <= mu_s");
  }
}

double box_stiction_threshold(const BoxBody& box, double lift, double g) {
  return box.mu_s * std::max(0.0, box.mass * g - lift);
}

WallContact wall_contact(const BoxBody& box, const Wall& wall) {
  WallContact out;
  const double c = std::cos(box.pose.z()), sn = std::sin(box.pose.z());
  for (int corner = 0; corner < 4; ++corner) {
    const double lx = (corner & 1) ? box.half_x : -box.half_x;
    const double ly = (corner & 2) ? box.half_y : -box.half_y;
    const double rx = c * lx - sn * ly, ry = sn * lx + c * ly;
    const double pen = box.pose.x() + rx - wall.x;
    if (pen <= 0.0) continue;
    const double vx = box.velocity.x() - box.velocity.z() * ry;
    const double fn = std::max(0.0, wall.k * pen + wall.b * vx);
    out.wrench.x() -= fn;
    out.wrench.z() += ry * fn;
    out.normal += fn;
  }
  return out;
}

BoxStep box_step(BoxBody box, const Vec3& applied, double lift, double g, double dt) {
  BoxStep out;
  const double normal_load = std::max(0.0, box.mass * g - lift);
  const double radius = box.friction_radius();
  const double I = box.inertia();
  const bool at_rest =
      box.velocity.x() == 0.0 && box.velocity.y() == 0.0 && box.velocity.z() == 0.0;
  const double F_t = std::hypot(applied.x(), applied.y());
  if (at_rest && F_t <= box.mu_s * normal_load &&
      std::abs(applied.z()) <= box.mu_s * normal_load * radius) {
    out.box = box;
    out.stuck = true;
    return out;
  }
  Vec3 v = box.velocity;
  v.x() += applied.x() / box.mass * dt;
  v.y() += applied.y() / box.mass * dt;
  v.z() += applied.z() / I * dt;
  // kinetic friction as a velocity-level impulse that cannot reverse motion
  const double dv = box.mu_k * normal_load / box.mass * dt;
  const double speed = std::hypot(v.x(), v.y());
  if (speed <= dv) {
    v.x() = 0.0;
    v.y() = 0.0;
  } else {
    v.x() -= dv * v.x() / speed;
    v.y() -= dv * v.y() / speed;
  }
  const double dw = box.mu_k * normal_load * radius / I * dt;
  if (std::abs(v.z()) <= dw) {
    v.z() = 0.0;
  } else {
    v.z() -= std::copysign(dw, v.z());
  }
  box.velocity = v;
  box.pose += v * dt;
  out.box = box;
  return out;
}

bool SlotRegion::contains(const Pose2& p) const {
  return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max &&
         std::abs(p.z()) <= yaw_tolerance;
}

const char* to_string(AgentMode m) {
  switch (m) {
    case AgentMode::None: return "none";
    case AgentMode::Scripted: return "scripted";
    case AgentMode::Leader: return "leader";
    case AgentMode::Follower: return "follower";
  }
  return "?";
}

AgentMode agent_mode_from(const std::string& s) {
  if (s == "none") return AgentMode::None;
  if (s == "scripted") return AgentMode::Scripted;
  if (s == "leader") return AgentMode::Leader;
  if (s == "follower") return AgentMode::Follower;
  throw std::invalid_argument("unknown agent mode: " + s);
}

Vec3 hold_keyframes(const std::vector<Keyframe>& frames, double t) {
  Vec3 v = Vec3::Zero();
  for (const Keyframe& k : frames) {
    if (k.t > t) break;
    v = k.v;
  }
  return v;
}

void ExternalAgent::validate() const {
  if (!(k >= 0 && b >= 0 && max_force > 0)) throw std::invalid_argument("agent gains");
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (trajectory[i].t < trajectory[i - 1].t) throw std::invalid_argument("agent keyframes unsorted");
  }
  for (std::size_t i = 1; i < wrench.size(); ++i) {
    if (wrench[i].t < wrench[i - 1].t) throw std::invalid_argument("agent keyframes unsorted");
  }
}

AgentWrench agent_step(const ExternalAgent& agent, const SharedObject& object, double t,
                       const Pose2& base, const Pose2& base_velocity) {
  AgentWrench out;
  if (agent.mode == AgentMode::None) return out;
  if (agent.mode == AgentMode::Scripted) {
    out.wrench = hold_keyframes(agent.wrench, t);
    const double f = out.wrench.head<2>().norm();
    if (f > agent.max_force) {
      out.wrench.head<2>() *= agent.max_force / f;
      out.limited = true;
    }
    return out;
  }

  // Desired grip points and their velocities.
  PerArm<Vec3> p_des, v_des{Vec3::Zero(), Vec3::Zero()};
  if (agent.mode == AgentMode::Leader) {
    // the leader turns the bar about the middle of its own grips
    const Vec3 offset = hold_keyframes(agent.trajectory, t);
    const Vec3 mid = planar_point(agent.reference, 0.5 * (object.agent_grip[0] + object.agent_grip[1]));
    const double c = std::cos(offset.z()), s = std::sin(offset.z());
    for (std::size_t g = 0; g < 2; ++g) {
      const Vec3 r = planar_point(agent.reference, object.agent_grip[g]) - mid;
      p_des[g] = Vec3(mid.x() + offset.x() + c * r.x() - s * r.y(),
                      mid.y() + offset.y() + s * r.x() + c * r.y(), 0.0);
    }
  } else {
    const Vec3 offset = planar_point(Pose2(0, 0, base.z()), Vec3(agent.reference.x(),
                                                                agent.reference.y(), 0.0));
    const Pose2 target(base.x() + offset.x(), base.y() + offset.y(), base.z() + agent.reference.z());
    for (std::size_t g = 0; g < 2; ++g) {
      p_des[g] = planar_point(target, object.agent_grip[g]);
      v_des[g] = planar_point_velocity(base, base_velocity, p_des[g]);
    }
  }

  const double per_grip = 0.5 * agent.max_force;
  for (std::size_t g = 0; g < 2; ++g) {
    const Vec3 p = planar_point(object.pose, object.agent_grip[g]);
    const Vec3 v = planar_point_velocity(object.pose, object.velocity, p);
    Vec3 F = agent.k * (p_des[g] - p) + agent.b * (v_des[g] - v);
    F.z() = 0.0;
    const double mag = F.norm();
    if (mag > per_grip) {
      F *= per_grip / mag;
      out.limited = true;
    }
    out.grip_force[g] = F;
    out.wrench.x() += F.x();
    out.wrench.y() += F.y();
    out.wrench.z() += (p.x() - object.pose.x()) * F.y() - (p.y() - object.pose.y()) * F.x();
  }
  return out;
}

BoxContact box_contact(const Vec3& hand, const Vec3& hand_velocity, const BoxBody& box,
                       const HandAnchor& anchor, const ContactParams& cp) {
  BoxContact out;
  const FaceSample f = sample_face(hand, box, anchor.active ? anchor.face : -1);
  if (!f.inside) return out;
  out.touching = true;
  out.face = f.face;
  out.s = f.s;
  out.z = hand.z();

  const Vec3 v_rel = hand_velocity - planar_point_velocity(box.pose, box.velocity, hand);
  const double depth_rate = -v_rel.dot(f.n);
  out.normal = std::max(0.0, cp.k_n * f.depth + cp.b_n * depth_rate);

  const double s0 = anchor.active ? anchor.s : f.s;
  const double z0 = anchor.active ? anchor.z : hand.z();
  double Ft_s = -cp.k_t * (f.s - s0) - cp.b_t * v_rel.dot(f.t);
  double Ft_z = -cp.k_t * (hand.z() - z0) - cp.b_t * v_rel.z();
  const double cap = cp.mu_hand * out.normal;
  const double mag = std::hypot(Ft_s, Ft_z);
  if (mag > cap) {
    const double scale = mag > 0.0 ? cap / mag : 0.0;
    Ft_s *= scale;
    Ft_z *= scale;
    out.slipping = true;
  }
  out.force = out.normal * f.n + Ft_s * f.t + Vec3(0, 0, Ft_z);
  return out;
}

HandAnchor update_anchor(const Vec3& hand, const Vec3& hand_velocity, const BoxBody& box,
                         const HandAnchor& anchor, const ContactParams& cp) {
  const FaceSample f = sample_face(hand, box, anchor.active ? anchor.face : -1);
  if (!f.inside) return HandAnchor{};
  HandAnchor next = anchor;
  if (!anchor.active) {
    next.active = true;
    next.face = f.face;
    next.s = f.s;
    next.z = hand.z();
    return next;
  }
  const Vec3 v_rel = hand_velocity - planar_point_velocity(box.pose, box.velocity, hand);
  const double normal = std::max(0.0, cp.k_n * f.depth - cp.b_n * v_rel.dot(f.n));
  const double es = f.s - anchor.s, ez = hand.z() - anchor.z;
  const double stretch = std::hypot(es, ez);
  const double cap = cp.mu_hand * normal;
  if (cp.k_t * stretch > cap) {
    // slide the anchor until the spring sits on the friction cone
    const double keep = stretch > 0.0 ? cap / (cp.k_t * stretch) : 0.0;
    next.s = f.s - keep * es;
    next.z = hand.z() - keep * ez;
  }
  return next;
}

Pose2 World::base_velocity() const {
  return Pose2(robot.xdot * std::cos(robot.phi), robot.xdot * std::sin(robot.phi), robot.phidot);
}

Mat3 torso_rotation(double theta, double phi) {
  return (Eigen::AngleAxisd(phi, Vec3::UnitZ()) * Eigen::AngleAxisd(theta, Vec3::UnitY()))
      .toRotationMatrix();
}

PerArm<Vec3> hand_positions(const World& w) {
  const StateVec s = pack(w.robot, w.base_x, w.base_y);
  PerArm<Vec3> out;
  for (Side side : kSides) {
    out[idx(side)] = hand_kinematics(s, idx(side), w.params.mounted_arm(side)).p;
  }
  return out;
}

void attach_object(World& w) {
  const PerArm<Vec3> hands = hand_positions(w);
  SharedObject& obj = w.object;
  const Vec3 mid = 0.5 * (hands[0] + hands[1]);
  obj.pose = Pose2(mid.x(), mid.y(), w.robot.phi);
  obj.velocity = w.base_velocity();
  const double c = std::cos(w.robot.phi), s = std::sin(w.robot.phi);
  for (std::size_t i = 0; i < 2; ++i) {
    const Vec3 d = hands[i] - mid;
    obj.robot_grip[i] = Vec3(c * d.x() + s * d.y(), -s * d.x() + c * d.y(), hands[i].z());
  }
  if (w.agent.mode == AgentMode::Follower) {
    const double dx = obj.pose.x() - w.base_x, dy = obj.pose.y() - w.base_y;
    w.agent.reference = Pose2(c * dx + s * dy, -s * dx + c * dy, obj.pose.z() - w.robot.phi);
  } else if (w.agent.mode == AgentMode::Leader) {
    w.agent.reference = obj.pose;
  }
}

World world_step(World w, const TorqueCommand& cmd, double dt) {
  if (!finite_command(cmd)) throw std::invalid_argument("world_step: non-finite torque");
  if (!(dt > 0.0 && dt <= 0.01)) throw std::invalid_argument("world_step: dt outside (0, 0.01]");
  if (!w.robot.finite()) throw std::invalid_argument("world_step: non-finite state");

  const PerArm<ArmModel> arms{w.params.mounted_arm(Side::Left), w.params.mounted_arm(Side::Right)};
  const Environment env{w, arms, cmd};

  // Robot, with the box and object held at their step-start state.
  StateVec s = pack(w.robot, w.base_x, w.base_y);
  PerArm<Vec3> box_impulse{Vec3::Zero(), Vec3::Zero()};
  PerArm<Vec3> latch_impulse{Vec3::Zero(), Vec3::Zero()};
  const int n = w.contact.substeps;
  const double h = dt / n;
  for (int k = 0; k < n; ++k) {
    const Derivative k1 = derivative(s, env);
    const Derivative k2 = derivative(s + 0.5 * h * k1.ds, env);
    const Derivative k3 = derivative(s + 0.5 * h * k2.ds, env);
    const Derivative k4 = derivative(s + h * k3.ds, env);
    s += (h / 6.0) * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
    for (std::size_t i = 0; i < 2; ++i) {
      box_impulse[i] += (h / 6.0) * (k1.box_force[i] + 2.0 * k2.box_force[i] +
                                     2.0 * k3.box_force[i] + k4.box_force[i]);
      latch_impulse[i] += (h / 6.0) * (k1.latch_force[i] + 2.0 * k2.latch_force[i] +
                                       2.0 * k3.latch_force[i] + k4.latch_force[i]);
    }
  }

  World next = w;
  unpack(s, next.robot, next.base_x, next.base_y);
  PerArm<Vec3> box_force, latch_force_avg;
  for (std::size_t i = 0; i < 2; ++i) {
    box_force[i] = box_impulse[i] / dt;
    latch_force_avg[i] = latch_impulse[i] / dt;
    next.hand_force[i] = box_force[i] + latch_force_avg[i];
  }

  const double phi0 = w.robot.phi;
  const Vec3 heading_x(std::cos(phi0), std::sin(phi0), 0.0);
  const PerArm<Vec3> hands0 = hand_positions(w);
  next.F_ext_x = 0.0;
  next.M_ext_z = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    next.F_ext_x += heading_x.dot(next.hand_force[i]);
    next.M_ext_z += (hands0[i].x() - w.base_x) * next.hand_force[i].y() -
                    (hands0[i].y() - w.base_y) * next.hand_force[i].x();
  }

  // Box: semi-implicit Euler with explicit static test.
  next.wall_force = 0.0;
  next.box_lift = 0.0;
  next.box_stuck = false;
  if (w.box.enabled) {
    BoxBody& box = next.box;
    Vec3 F = Vec3::Zero();  // (fx, fy, mz)
    for (std::size_t i = 0; i < 2; ++i) {
      const Vec3 f = -box_force[i];
      F.x() += f.x();
      F.y() += f.y();
      F.z() += (hands0[i].x() - box.pose.x()) * f.y() - (hands0[i].y() - box.pose.y()) * f.x();
      next.box_lift += f.z();
    }
    if (w.wall.enabled) {
      const WallContact wc = wall_contact(box, w.wall);
      F += wc.wrench;
      next.wall_force = wc.normal;
    }
    const BoxStep step = box_step(box, F, next.box_lift, w.params.g, dt);
    box = step.box;
    next.box_stuck = step.stuck;
  }

  next.agent_out = AgentWrench{};
  if (w.object.enabled) {
    SharedObject& obj = next.object;
    next.agent_out = agent_step(w.agent, w.object, w.time, w.base_pose(), w.base_velocity());
    Vec3 F = next.agent_out.wrench;
    for (std::size_t i = 0; i < 2; ++i) {
      const Vec3 grip = planar_point(w.object.pose, w.object.robot_grip[i]);
      const Vec3 f = -latch_force_avg[i];
      F.x() += f.x();
      F.y() += f.y();
      F.z() += (grip.x() - obj.pose.x()) * f.y() - (grip.y() - obj.pose.y()) * f.x();
    }
    obj.velocity.x() += F.x() / obj.mass * dt;
    obj.velocity.y() += F.y() / obj.mass * dt;
    obj.velocity.z() += F.z() / obj.inertia * dt;
    obj.pose += obj.velocity * dt;
  }

  // Stick anchors against the box at its new pose.
  const StateVec s_end = pack(next.robot, next.base_x, next.base_y);
  for (std::size_t i = 0; i < 2; ++i) {
    const HandKinematics hk = hand_kinematics(s_end, i, arms[i]);
    next.hand_position[i] = hk.p;
    if (next.box.enabled) {
      next.anchor[i] = update_anchor(hk.p, hk.v, next.box, w.anchor[i], next.contact);
    }
  }
  next.time = w.time + dt;
  return next;
}

}  // namespace teleop
