#include "teleop/haptics/haptics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>

namespace teleop {

void FeedbackConfig::validate() const {
  if (!(K_fb >= 0.0)) throw std::invalid_argument("K_fb must be non-negative");
  if (!(force_limit > 0.0 && moment_limit > 0.0)) {
    throw std::invalid_argument("haptic limits must be positive");
  }
  if (!(contact_dwell > 0.0) || !(contact_threshold >= 0.0)) {
    throw std::invalid_argument("contact dwell/threshold out of range");
  }
}

double saturate_symmetric(double v, double limit, bool* flag) {
  const double out = std::clamp(v, -limit, limit);
  if (flag && out != v) *flag = true;
  return out;
}

ForceFeedback force_feedback(double xi_R, double xi_H, double F_ext_x,
                             const PhysicalParams& params, const FeedbackConfig& cfg) {
  if (!std::isfinite(xi_R) || !std::isfinite(xi_H) || !std::isfinite(F_ext_x)) {
    throw std::invalid_argument("force_feedback: non-finite input");
  }
  ForceFeedback out;
  out.dcm_sync_term = params.gamma_H * (xi_R - xi_H);
  if (cfg.enable_contact_force) out.contact_force_term = params.gamma_H / params.gamma_R * F_ext_x;
  out.F_xH = saturate_symmetric(out.dcm_sync_term + out.contact_force_term, cfg.force_limit,
                                &out.saturated);
  return out;
}

MomentFeedback moment_feedback(double M_zR, double M_ext_z, const PhysicalParams& params,
                               const FeedbackConfig& cfg) {
  if (!std::isfinite(M_zR) || !std::isfinite(M_ext_z)) {
    throw std::invalid_argument("moment_feedback: non-finite input");
  }
  MomentFeedback out;
  if (!cfg.enable_moment_fb) return out;
  const double ratio = params.I_zH / params.I_zR;
  if (cfg.include_robot_moment) out.robot_moment_term = ratio * M_zR;
  out.contact_moment_term = ratio * cfg.K_fb * M_ext_z;
  out.M_zH_fb = saturate_symmetric(out.robot_moment_term + out.contact_moment_term,
                                   cfg.moment_limit, &out.saturated);
  return out;
}

double ff_moment(double M_zH, const PhysicalParams& params, const FeedbackConfig& cfg) {
  if (!std::isfinite(M_zH)) throw std::invalid_argument("ff_moment: non-finite input");
  return cfg.enable_ff_moment ? params.I_zR / params.I_zH * M_zH : 0.0;
}

const char* to_string(Contact c) {
  switch (c) {
    case Contact::None: return "none";
    case Contact::Left: return "left";
    case Contact::Right: return "right";
    case Contact::Both: return "both";
  }
  return "?";
}

Contact contact_from(bool left, bool right) {
  return static_cast<Contact>((left ? 1 : 0) | (right ? 2 : 0));
}

bool in_contact(Contact c, Side s) {
  const auto bits = static_cast<unsigned>(c);
  return s == Side::Left ? (bits & 1u) != 0 : (bits & 2u) != 0;
}

ContactState contact_machine_step(bool raw_left, bool raw_right, ContactState prev, double dt,
                                  double dwell) {
  if (!(dt > 0.0)) throw std::invalid_argument("contact_machine_step: dt must be positive");
  const Contact raw = contact_from(raw_left, raw_right);
  ContactState next = prev;
  if (raw != prev.raw) {
    next.raw = raw;
    next.dwell_elapsed = 0.0;
  }
  next.dwell_elapsed += dt;
  next.since_commit += dt;
  // tolerance absorbs accumulated rounding of repeated dt additions
  if (next.raw != next.committed && next.dwell_elapsed >= dwell - 1e-9) {
    next.committed = next.raw;
    next.since_commit = 0.0;
  }
  return next;
}

ExternalMomentEstimate estimate_external_moment(Contact contact, const PerArm<Vec4>& tau,
                                                const PerArm<Mat34>& J,
                                                const PerArm<Vec3>& r) {
  ExternalMomentEstimate out;
  for (Side s : kSides) {
    if (!in_contact(contact, s)) continue;
    const std::size_t i = idx(s);
    Mat3 JJt = J[i] * J[i].transpose();
    const double sigma_min =
        std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<Mat3>(JJt).eigenvalues()[0]));
    if (sigma_min < kEstimateSingular) {
      JJt += kEstimateDamping * Mat3::Identity();
      out.damped[i] = true;
    }
    out.force[i] = JJt.ldlt().solve(J[i] * tau[i]);
    out.M += r[i].cross(out.force[i]);
  }
  return out;
}

YawBodyAccelerations yaw_body_accelerations(double M_zH, double M_zR, double M_ext_z,
                                            const PhysicalParams& params,
                                            const FeedbackConfig& cfg) {
  YawBodyAccelerations out;
  out.M_ff = ff_moment(M_zH, params, cfg);
  out.M_fb = moment_feedback(M_zR, M_ext_z, params, cfg).M_zH_fb;
  out.robot = (out.M_ff + M_zR + M_ext_z) / params.I_zR;
  out.human = (M_zH + out.M_fb) / params.I_zH;
  return out;
}

}  // namespace teleop
