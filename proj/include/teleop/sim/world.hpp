#pragma once

#include "teleop/control/controllers.hpp"
#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"

#include <string>
#include <vector>

namespace teleop {

// Planar pose or velocity (x, y, yaw).
using Pose2 = Vec3;

struct ContactParams {
  double k_n = 5000.0;  // hand/box normal stiffness, N/m
  double b_n = 50.0;    // N*s/m
  double k_t = 3000.0;  // tangential stick spring, N/m
  double b_t = 20.0;    // N*s/m
  double mu_hand = 0.8; // hand/box friction
  int substeps = 2;     // robot integration substeps per world step
  void validate() const;
};

struct BoxBody {
  bool enabled = false;
  double mass = 5.0;     // kg
  double half_x = 0.20;  // m
  double half_y = 0.25;  // m
  Pose2 pose = Pose2::Zero();
  Pose2 velocity = Pose2::Zero();
  double mu_s = 0.4;
  double mu_k = 0.3;

  double inertia() const;
  // Lever arm turning the friction force into the friction moment.
  double friction_radius() const { return 0.5 * (half_x + half_y); }
  void validate() const;
};

// Static friction limit under a net upward hand force `lift`.
double box_stiction_threshold(const BoxBody& box, double lift, double g = 9.81);

// Vertical wall with its face at x, normal pointing to -x.
struct Wall {
  bool enabled = false;
  double x = 2.0;
  double k = 20000.0;  // N/m
  double b = 200.0;    // N*s/m
};

struct WallContact {
  Vec3 wrench = Vec3::Zero();  // (fx, fy, mz) on the box about its center
  double normal = 0.0;         // total normal force, N
};
WallContact wall_contact(const BoxBody& box, const Wall& wall);

struct BoxStep {
  BoxBody box;
  bool stuck = false;  // held by static friction
};

// One semi-implicit step of the box on the ground under the applied planar
// wrench (fx, fy, mz). A box at rest stays exactly at rest while the force
// and moment are within the static limits under the reduced normal load.
BoxStep box_step(BoxBody box, const Vec3& applied, double lift, double g, double dt);

struct SlotRegion {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double yaw_tolerance = 0.15;
  bool contains(const Pose2& p) const;
};

// Rigid bar carried jointly by the robot and an external agent.
struct SharedObject {
  bool enabled = false;
  double mass = 0.8;
  double inertia = 0.07;
  Pose2 pose = Pose2::Zero();
  Pose2 velocity = Pose2::Zero();
  PerArm<Vec3> robot_grip{Vec3::Zero(), Vec3::Zero()};  // body frame, z absolute
  PerArm<Vec3> agent_grip{Vec3::Zero(), Vec3::Zero()};  // body frame
  double latch_k = 2000.0;  // N/m
  double latch_b = 40.0;    // N*s/m
};

enum class AgentMode : std::uint8_t { None, Scripted, Leader, Follower };
const char* to_string(AgentMode m);
AgentMode agent_mode_from(const std::string& s);

// Zero-order-hold keyframe: from `t` on, the value is `v`.
struct Keyframe {
  double t = 0.0;
  Vec3 v = Vec3::Zero();
};
Vec3 hold_keyframes(const std::vector<Keyframe>& frames, double t);

struct ExternalAgent {
  AgentMode mode = AgentMode::None;
  double k = 400.0;         // per-grip stiffness, N/m
  double b = 60.0;          // per-grip damping, N*s/m
  double max_force = 60.0;  // total, N
  std::vector<Keyframe> trajectory;  // leader: object pose offsets from its initial pose
  std::vector<Keyframe> wrench;      // scripted: (fx, fy, mz)
  Pose2 reference = Pose2::Zero();   // leader: initial object pose; follower: offset from the base
  void validate() const;
};

struct AgentWrench {
  Vec3 wrench = Vec3::Zero();  // (fx, fy, mz) on the object about its center
  PerArm<Vec3> grip_force{Vec3::Zero(), Vec3::Zero()};
  bool limited = false;
};

// `base` is the robot base pose and velocity, used by the follower.
AgentWrench agent_step(const ExternalAgent& agent, const SharedObject& object, double t,
                       const Pose2& base, const Pose2& base_velocity);

// Stick anchor of one hand on the box, box frame.
struct HandAnchor {
  bool active = false;
  int face = -1;  // 0:+x 1:-x 2:+y 3:-y
  double s = 0.0;  // along the face
  double z = 0.0;
};

struct BoxContact {
  Vec3 force = Vec3::Zero();  // on the hand, world frame
  double normal = 0.0;
  bool touching = false;
  bool slipping = false;
  int face = -1;
  double s = 0.0;
  double z = 0.0;
};

// Penalty contact of a point hand against the box side faces.
BoxContact box_contact(const Vec3& hand, const Vec3& hand_velocity, const BoxBody& box,
                       const HandAnchor& anchor, const ContactParams& cp);

// Anchor after a step ends with the hand at `hand`.
HandAnchor update_anchor(const Vec3& hand, const Vec3& hand_velocity, const BoxBody& box,
                         const HandAnchor& anchor, const ContactParams& cp);

struct World {
  PhysicalParams params;
  ContactParams contact;
  RobotState robot;
  double base_x = 0.0;  // world position of the axle midpoint
  double base_y = 0.0;
  BoxBody box;
  Wall wall;
  SharedObject object;
  ExternalAgent agent;
  double time = 0.0;
  PerArm<HandAnchor> anchor;

  // Outputs of the last step.
  PerArm<Vec3> hand_position{Vec3::Zero(), Vec3::Zero()};  // world
  PerArm<Vec3> hand_force{Vec3::Zero(), Vec3::Zero()};     // on the hand, world, step average
  double F_ext_x = 0.0;  // heading-frame x resultant of hand forces
  double M_ext_z = 0.0;  // about the yaw axis
  double wall_force = 0.0;
  double box_lift = 0.0;
  bool box_stuck = false;  // static friction held the box this step
  AgentWrench agent_out;

  Pose2 base_pose() const { return Pose2(base_x, base_y, robot.phi); }
  Pose2 base_velocity() const;
};

// Torso-to-world rotation Rz(phi) Ry(theta).
Mat3 torso_rotation(double theta, double phi);

// Hand positions in the world for the current robot state.
PerArm<Vec3> hand_positions(const World& w);

// Places the shared object so its robot grips sit at the current hands and
// captures the follower offset.
void attach_object(World& w);

// Advances the world by dt. Throws std::invalid_argument on non-finite
// torques or a non-finite state.
World world_step(World w, const TorqueCommand& cmd, double dt);

}  // namespace teleop
