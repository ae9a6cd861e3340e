#pragma once

#include "teleop/core/params.hpp"
#include "teleop/core/types.hpp"

namespace teleop {

struct FeedbackConfig {
  double K_fb = 0.5;                  // contact-moment scaling
  bool enable_contact_force = false;  // sagittal contact term of the force feedback
  bool enable_moment_fb = false;      // pilot toggle
  bool enable_ff_moment = false;
  bool include_robot_moment = false;  // false drops the wheel-induced moment from the feedback
  double force_limit = 400.0;         // N, HMI capability
  double moment_limit = 20.0;         // N*m, HMI capability
  double contact_threshold = 0.5;     // N, raw hand contact
  double contact_dwell = 0.055;       // s
  void validate() const;
};

struct ForceFeedback {
  double F_xH = 0.0;
  bool saturated = false;
  double dcm_sync_term = 0.0;
  double contact_force_term = 0.0;
};

struct MomentFeedback {
  double M_zH_fb = 0.0;
  bool saturated = false;
  double robot_moment_term = 0.0;
  double contact_moment_term = 0.0;
};

struct HapticFeedback {
  ForceFeedback force;
  MomentFeedback moment;
};

double saturate_symmetric(double v, double limit, bool* flag = nullptr);

// gamma_H (xi_R - xi_H) + [contact]*(gamma_H/gamma_R) F_ext, clamped.
ForceFeedback force_feedback(double xi_R, double xi_H, double F_ext_x,
                             const PhysicalParams& params, const FeedbackConfig& cfg);

// [enabled]*(I_zH/I_zR)(M_zR + K_fb M_ext), clamped.
MomentFeedback moment_feedback(double M_zR, double M_ext_z, const PhysicalParams& params,
                               const FeedbackConfig& cfg);

// (I_zR/I_zH) M_zH when enabled, else 0.
double ff_moment(double M_zH, const PhysicalParams& params, const FeedbackConfig& cfg);

enum class Contact : std::uint8_t { None = 0, Left = 1, Right = 2, Both = 3 };
const char* to_string(Contact c);
Contact contact_from(bool left, bool right);
bool in_contact(Contact c, Side s);

struct ContactState {
  Contact committed = Contact::None;
  Contact raw = Contact::None;  // last raw sample
  double dwell_elapsed = 0.0;   // time the raw state has been stable, s
  double since_commit = 1e9;    // time since the last committed change, s
};

// Debounced four-state contact machine. A raw change restarts the dwell
// timer; the committed state follows once the raw state has held for `dwell`.
ContactState contact_machine_step(bool raw_left, bool raw_right, ContactState prev, double dt,
                                  double dwell = FeedbackConfig{}.contact_dwell);

struct ExternalMomentEstimate {
  Vec3 M = Vec3::Zero();
  PerArm<Vec3> force{Vec3::Zero(), Vec3::Zero()};  // per-hand force estimate
  PerArm<bool> damped{false, false};
};

inline constexpr double kEstimateDamping = 1e-6;   // lambda^2
inline constexpr double kEstimateSingular = 1e-3;  // smallest singular value of J, m

// Hand force (J^T)^+ tau per hand in contact, summed as r x F. J and r must be
// expressed in the same frame; tau is the motor torque net of gravity.
ExternalMomentEstimate estimate_external_moment(Contact contact, const PerArm<Vec4>& tau,
                                                const PerArm<Mat34>& J,
                                                const PerArm<Vec3>& r);

// Instantaneous yaw accelerations of the robot and pilot single rigid bodies
// under the feedback and feedforward laws.
struct YawBodyAccelerations {
  double robot = 0.0;
  double human = 0.0;
  double M_fb = 0.0;
  double M_ff = 0.0;
};
YawBodyAccelerations yaw_body_accelerations(double M_zH, double M_zR, double M_ext_z,
                                            const PhysicalParams& params,
                                            const FeedbackConfig& cfg);

}  // namespace teleop
