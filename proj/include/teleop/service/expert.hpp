#pragma once

#include "teleop/service/session.hpp"

#include <string>

namespace teleop {

// Planar two-link inverse kinematics for an arm kept in its pitch plane
// (q0 = q2 = 0): joint angles placing the hand at `hand` (torso frame).
Vec4 planar_arm_pose(const Vec3& hand, const ArmModel& arm);

struct ExpertTuning {
  double approach_speed = 0.10;  // m/s, sagittal P before contact
  double push_speed = 0.15;      // m/s, box speed target while pushing
  double slow_zone = 0.12;       // m before the wall where the target speed drops
  double slow_speed = 0.05;      // m/s
  double hand_reach = 0.006;     // m the hands are commanded past the box face
  double lift = 0.05;            // m the hands are commanded above their contact height
  double lean_gain = 1.2;        // rad per m/s of speed error
  double lean_integral = 0.8;    // rad per m of accumulated speed error
  double max_lean = 0.35;        // rad
  double final_lean = 0.15;      // rad held against the wall
};

// Closed-loop pilot that reads the full world state. Used to author box
// slotting traces; the traces are then replayed open loop.
class ExpertPilot {
 public:
  enum class Phase { Approach, Push, Settle };

  ExpertPilot(const Scenario& scenario, const TeleopConfig& cfg, ExpertTuning tuning = {});
  PilotInput next(const Session& session);
  Phase phase() const { return phase_; }

 private:
  Scenario scenario_;
  TeleopConfig cfg_;
  ExpertTuning tuning_;
  Phase phase_ = Phase::Approach;
  double integral_ = 0.0;
  PerArm<Vec3> neutral_hand_;  // heading frame
  PerArm<double> contact_height_{0.0, 0.0};
  double reach_ = 0.0;
  int push_start_ = 0;
  PilotInput last_;
};

const char* to_string(ExpertPilot::Phase p);

}  // namespace teleop
