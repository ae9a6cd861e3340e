#include "teleop/service/expert.hpp"

#include "teleop/core/arm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teleop {

namespace {

constexpr double kLeanRate = 0.5;  // rad/s, how fast the pilot changes lean

}  // namespace

Vec4 planar_arm_pose(const Vec3& hand, const ArmModel& arm) {
  // shoulder base frame: zero pose hangs down, q1 swings the arm forward
  const Vec3 rel = hand - arm.shoulder_position;
  const double dx = rel.x(), dz = rel.z();
  const double L1 = arm.upper_length, L2 = arm.fore_length;
  const double D = std::clamp(std::hypot(dx, dz), std::abs(L1 - L2) + 1e-6, L1 + L2 - 1e-6);
  const double elbow = M_PI - std::acos(std::clamp((L1 * L1 + L2 * L2 - D * D) / (2 * L1 * L2), -1.0, 1.0));
  const double beta = std::atan2(dx, -dz);
  const double inner = std::asin(std::clamp(L2 * std::sin(elbow) / D, -1.0, 1.0));
  return Vec4(0.0, beta - inner, 0.0, elbow);
}

const char* to_string(ExpertPilot::Phase p) {
  switch (p) {
    case ExpertPilot::Phase::Approach: return "approach";
    case ExpertPilot::Phase::Push: return "push";
    case ExpertPilot::Phase::Settle: return "settle";
  }
  return "?";
}

ExpertPilot::ExpertPilot(const Scenario& scenario, const TeleopConfig& cfg, ExpertTuning tuning)
    : scenario_(scenario), cfg_(cfg), tuning_(tuning) {
  if (!scenario_.box.enabled) throw std::invalid_argument("expert pilot needs a box scenario");
  for (Side side : kSides) {
    neutral_hand_[idx(side)] = arm_fk(scenario_.arm_q[idx(side)], cfg_.physical.mounted_arm(side));
  }
}

PilotInput ExpertPilot::next(const Session& session) {
  const World& w = session.world();
  const RobotState& r = w.robot;
  const PhysicalParams& p = cfg_.physical;
  const double dt = cfg_.timing.control_dt;
  const double k_v = cfg_.retarget.gains.k_v;
  const BoxBody& box = w.box;

  // box in the heading frame
  const double c = std::cos(r.phi), s = std::sin(r.phi);
  const double bx = c * (box.pose.x() - w.base_x) + s * (box.pose.y() - w.base_y);
  const double face = bx - box.half_x;
  const double wall_gap = w.wall.enabled ? w.wall.x - (box.pose.x() + box.half_x) : 1e9;
  const bool touching = w.anchor[0].active && w.anchor[1].active;

  PilotInput in;
  in.u_y = Mode::P;
  in.u_A = Mode::P;
  const PilotInput& prev = session.tick() > 0 ? last_ : in;

  double lean = 0.0;
  switch (phase_) {
    case Phase::Approach:
      in.u_s = Mode::P;
      lean = tuning_.approach_speed / k_v;
      if (touching) {
        phase_ = Phase::Push;
        for (std::size_t i = 0; i < 2; ++i) contact_height_[i] = w.hand_position[i].z();
        reach_ = face + tuning_.hand_reach;
        push_start_ = session.tick();
      }
      break;
    case Phase::Push:
    case Phase::Settle: {
      in.u_s = Mode::D;
      const double v_ref = wall_gap < tuning_.slow_zone ? tuning_.slow_speed : tuning_.push_speed;
      const double err = v_ref - box.velocity.x();
      integral_ = std::clamp(integral_ + err * dt, -0.2, tuning_.max_lean / tuning_.lean_integral);
      lean = tuning_.lean_gain * err + tuning_.lean_integral * integral_;
      if (phase_ == Phase::Settle) lean = tuning_.final_lean;
      if (scenario_.slot.contains(box.pose) && w.wall_force > scenario_.success_wall_force) {
        phase_ = Phase::Settle;
      }
      break;
    }
  }
  lean = std::clamp(lean, 0.0, tuning_.max_lean);
  const double step = kLeanRate * dt;
  in.theta_H = std::clamp(lean, prev.theta_H - step, prev.theta_H + step);
  in.thetadot_H = (in.theta_H - prev.theta_H) / dt;
  if (in.u_s == Mode::P) in.thetadot_H = 0.0;

  // Hands: hold a fixed point in the heading frame, compensating the lean;
  // while pushing, reach a little into the face and press upward.
  const Mat3 pitch_inv = Eigen::AngleAxisd(-r.theta, Vec3::UnitY()).toRotationMatrix();
  for (Side side : kSides) {
    const std::size_t i = idx(side);
    const ArmModel arm = p.mounted_arm(side);
    Vec3 target = neutral_hand_[i];
    if (phase_ != Phase::Approach) {
      const double ramp = std::min(1.0, (session.tick() - push_start_) * dt / 0.5);
      target.x() = reach_;
      target.z() = contact_height_[i] + ramp * tuning_.lift;
    }
    in.q_aH[i] = planar_arm_pose(pitch_inv * target, arm);
  }
  in.timestamp = session.tick() * dt;
  last_ = in;
  return in;
}

}  // namespace teleop
