#pragma once

#include "teleop/control/controllers.hpp"
#include "teleop/haptics/haptics.hpp"
#include "teleop/retarget/retargeting.hpp"
#include "teleop/service/config.hpp"
#include "teleop/service/scenario.hpp"
#include "teleop/sim/world.hpp"

#include <string>

namespace teleop {

// Everything logged for one control tick.
struct TickRecord {
  int tick = 0;
  double t = 0.0;  // time at the start of the tick
  PilotInput input;  // after ingestion
  RobotState robot;  // after the tick
  double base_x = 0.0;
  double base_y = 0.0;
  ModeState modes;
  Setpoints setpoints;
  TorqueCommand command;
  ContactState contact;
  PerArm<Vec3> hand_force{Vec3::Zero(), Vec3::Zero()};  // tick average, on the hand
  double F_ext_x = 0.0;   // tick average
  double M_ext_z = 0.0;   // tick average, true moment about the yaw axis
  double M_ext_est = 0.0; // z-moment estimated from joint torques
  double xi_R = 0.0;
  double xi_H = 0.0;
  HapticFeedback haptic;
  double M_ff = 0.0;
  Pose2 box_pose = Pose2::Zero();
  Pose2 box_velocity = Pose2::Zero();
  double wall_force = 0.0;
  double box_lift = 0.0;
  Pose2 object_pose = Pose2::Zero();
  Vec3 agent_wrench = Vec3::Zero();
  bool fault = false;
};

// One bilateral session: input, transitions, retargeting, control, physics,
// haptics, in that order, once per control tick.
class Session {
 public:
  Session(Scenario scenario, TeleopConfig cfg);

  TickRecord step(const PilotInput& raw);
  // Zero torques from now on; the plant keeps running passively.
  TickRecord safe_stop_step();

  int tick() const { return tick_; }
  int total_ticks() const { return total_ticks_; }
  bool done() const { return tick_ >= total_ticks_; }
  bool faulted() const { return faulted_; }
  const World& world() const { return world_; }
  const ModeState& modes() const { return modes_; }
  const Scenario& scenario() const { return scenario_; }
  const TeleopConfig& config() const { return cfg_; }

 private:
  TickRecord advance(const PilotInput& input, const Setpoints& sp, const TorqueCommand& cmd);

  Scenario scenario_;
  TeleopConfig cfg_;
  World world_;
  ArmModels models_;
  ModeState modes_;
  PilotInput previous_input_;
  ContactState contact_;
  int tick_ = 0;
  int total_ticks_ = 0;
  bool faulted_ = false;
};

}  // namespace teleop
