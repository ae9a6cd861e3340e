#include "teleop/service/session.hpp"

#include "teleop/core/arm.hpp"
#include "teleop/core/dcm.hpp"
#include "teleop/core/yaw.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

namespace {

ModeState apply_transitions(ModeState modes, const PilotInput& in, const PilotInput& previous,
                            const RobotState& robot, const MappingGains& gains) {
  if (in.u_s != modes.mode_s) modes = transition_sagittal(modes, robot, in.u_s);
  if (in.u_y != modes.mode_y) modes = transition_yaw(modes, robot, previous, in.u_y, gains);
  if (in.u_A != modes.mode_A) modes = transition_arm(modes, in.u_A);
  return modes;
}

}  // namespace

Session::Session(Scenario scenario, TeleopConfig cfg)
    : scenario_(std::move(scenario)), cfg_(std::move(cfg)) {
  cfg_.validate();
  scenario_.validate();
  cfg_.control = synthesize(cfg_.control, cfg_.physical);
  world_ = make_world(scenario_, cfg_);
  models_ = ArmModels::from(cfg_.physical);
  modes_.x_R_des = world_.robot.x;
  for (Side s : kSides) modes_.ik_q0[idx(s)] = scenario_.arm_q[idx(s)][0];
  previous_input_.q_aH = scenario_.arm_q;
  total_ticks_ = scenario_.ticks(cfg_.timing.control_dt);
}

TickRecord Session::step(const PilotInput& raw) {
  if (done()) throw std::logic_error("session already finished");
  if (faulted_) return safe_stop_step();
  const double dt = cfg_.timing.control_dt;
  const MappingGains& gains = cfg_.retarget.gains;

  const PilotInput input = ingest_pilot_input(raw, cfg_.retarget.limits);
  modes_ = apply_transitions(modes_, input, previous_input_, world_.robot, gains);

  Setpoints sp;
  {
    auto [sag, m1] = pi_s(input, modes_, gains, cfg_.physical, dt);
    m1 = limit_position_error(m1, world_.robot.x, cfg_.retarget.position_error_limit);
    auto [yaw, m2] = pi_y(input, m1, gains);
    auto [arm, m3] = pi_A(input, models_, m2);
    modes_ = blend_step(m3, dt, cfg_.retarget.blend_span);
    sp.sagittal = sag;
    sp.yaw = yaw;
    sp.arm = arm;
  }
  const double t = tick_ * dt;
  if (scenario_.drift_time >= 0.0 && scenario_.drift_time >= t && scenario_.drift_time < t + dt) {
    modes_.x_R_des += scenario_.drift_amount;
    if (auto* v = std::get_if<VelocitySetpoint>(&sp.sagittal)) v->x_des += scenario_.drift_amount;
  }

  ControlOutput ctl = compute_control(world_.robot, sp, input, modes_, cfg_.physical, gains,
                                      cfg_.control, cfg_.limits);
  const double M_ff = ff_moment(input.M_zH, cfg_.physical, cfg_.haptics);
  if (M_ff != 0.0) {
    ctl.command.tau_y += M_ff * cfg_.physical.r_w / cfg_.physical.d;
    ctl.command = saturate(ctl.command, cfg_.limits);
  }
  previous_input_ = input;
  TickRecord rec = advance(input, sp, ctl.command);
  rec.M_ff = M_ff;
  return rec;
}

TickRecord Session::safe_stop_step() {
  if (done()) throw std::logic_error("session already finished");
  faulted_ = true;
  Setpoints sp;
  sp.arm.mode = modes_.mode_A;
  TickRecord rec = advance(previous_input_, sp, TorqueCommand{});
  rec.fault = true;
  return rec;
}

TickRecord Session::advance(const PilotInput& input, const Setpoints& sp,
                            const TorqueCommand& cmd) {
  const double dt = cfg_.timing.control_dt;
  const int n = cfg_.timing.physics_substeps;
  const double h = cfg_.timing.physics_dt();

  TickRecord rec;
  rec.tick = tick_;
  rec.t = tick_ * dt;
  rec.input = input;
  rec.setpoints = sp;
  rec.command = cmd;

  for (int k = 0; k < n; ++k) {
    world_ = world_step(world_, cmd, h);
    for (std::size_t i = 0; i < 2; ++i) rec.hand_force[i] += world_.hand_force[i] / n;
    rec.F_ext_x += world_.F_ext_x / n;
    rec.M_ext_z += world_.M_ext_z / n;
  }

  const PhysicalParams& p = cfg_.physical;
  const RobotState& r = world_.robot;

  // haptics
  const bool raw_left = rec.hand_force[0].norm() > cfg_.haptics.contact_threshold;
  const bool raw_right = rec.hand_force[1].norm() > cfg_.haptics.contact_threshold;
  contact_ = contact_machine_step(raw_left, raw_right, contact_, dt, cfg_.haptics.contact_dwell);

  // Joint torques net of gravity give the hand force in the heading frame;
  // the lever arm runs from the ground projection of the body's mass.
  const Mat3 pitch = Eigen::AngleAxisd(r.theta, Vec3::UnitY()).toRotationMatrix();
  PerArm<Vec4> tau_ext;
  PerArm<Mat34> J;
  PerArm<Vec3> lever;
  for (Side s : kSides) {
    const std::size_t i = idx(s);
    const ArmModel arm = p.mounted_arm(s);
    tau_ext[i] = arm_gravity(r.q[i], arm, p.g) - cmd.tau_arm[i];
    J[i] = pitch * arm_jacobian(r.q[i], arm);
    lever[i] = pitch * arm_fk(r.q[i], arm) - Vec3(p.h_R * std::sin(r.theta), 0.0, 0.0);
  }
  rec.M_ext_est = estimate_external_moment(contact_.committed, tau_ext, J, lever).M.z();

  rec.xi_R = dcm(r.theta, r.thetadot, p.omega_R()).xi;
  rec.xi_H = dcm(input.theta_H, input.thetadot_H, p.omega_H()).xi;
  rec.haptic.force = force_feedback(rec.xi_R, rec.xi_H, rec.F_ext_x, p, cfg_.haptics);
  rec.haptic.moment =
      moment_feedback(yaw_wheel_moment(cmd.tau_y, p), rec.M_ext_est, p, cfg_.haptics);

  rec.robot = r;
  rec.base_x = world_.base_x;
  rec.base_y = world_.base_y;
  rec.modes = modes_;
  rec.contact = contact_;
  rec.box_pose = world_.box.pose;
  rec.box_velocity = world_.box.velocity;
  rec.wall_force = world_.wall_force;
  rec.box_lift = world_.box_lift;
  rec.object_pose = world_.object.pose;
  rec.agent_wrench = world_.agent_out.wrench;
  ++tick_;
  return rec;
}

}  // namespace teleop
