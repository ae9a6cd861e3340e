// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "teleop/control/care.hpp"
#include "teleop/control/controllers.hpp"
#include "teleop/core/arm.hpp"
#include "teleop/core/cartpole.hpp"
#include "teleop/core/dcm.hpp"
#include "teleop/core/yaw.hpp"
#include "teleop/haptics/haptics.hpp"
#include "teleop/retarget/retargeting.hpp"
#include "teleop/service/config.hpp"
#include "teleop/service/run.hpp"
#include "teleop/service/runlog.hpp"
#include "teleop/service/scenario.hpp"
#include "teleop/service/trace.hpp"
#include "teleop/sim/world.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace teleop;
namespace fs = std::filesystem;

namespace {

std::mt19937_64 gen(0xacce97u);

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

Vec4 random_q(const ArmModel& m) {
  Vec4 q;
  for (int i = 0; i < 4; ++i) q[i] = uniform(m.q_min[i], m.q_max[i]);
  return q;
}

Vec3 random_vec3(double s) { return Vec3(uniform(-s, s), uniform(-s, s), uniform(-s, s)); }

double sigma_min(const Mat34& J) {
  return std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<Mat3>(J * J.transpose()).eigenvalues()[0]));
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

using Check = std::function<void(Outcome&)>;

const std::string kFixtures = TELEOP_FIXTURE_DIR;

RunLog run_named(const std::string& name, const TeleopConfig& cfg, Scenario* out = nullptr) {
  const Scenario sc = load_scenario(find_scenario(name, kFixtures));
  if (out) *out = sc;
  return run_scenario(sc, cfg, trace_pilot(read_trace(sc.trace)));
}

double steady_abs_mean(const RunLog& log, const std::string& column, double seconds) {
  const double dt = log.at(1, "t") - log.at(0, "t");
  const auto n = static_cast<std::size_t>(seconds / dt);
  double sum = 0.0;
  for (std::size_t r = log.rows.size() - n; r < log.rows.size(); ++r) sum += std::abs(log.at(r, column));
  return sum / static_cast<double>(n);
}

// --- criteria ---

void constants(Outcome& o) {
  const TeleopConfig c;
  o.require(c.retarget.gains.k_v == 3.0, "k_v");
  o.require(c.retarget.gains.k_y == 1.5, "k_y");
  o.require(c.retarget.gains.k_m == 25.0, "k_m");
  o.require(c.control.epsilon == 0.15, "epsilon");
  o.require(c.haptics.K_fb == 0.5, "K_fb");
  o.require(c.physical.I_zR == 0.1, "I_zR");
  o.require(c.physical.I_zH == 0.3, "I_zH");
  o.require(c.retarget.blend_span == 0.070, "blend span");
  o.require(c.haptics.contact_dwell == 0.055, "contact dwell");
  o.require(std::abs(1.0 / c.timing.control_dt - 200.0) < 1e-9, "loop rate");
  o.require(c.retarget.limits.yaw_limit == M_PI / 3.0, "yaw clamp");
  o.require(c.haptics.force_limit == 400.0, "force saturation");
  o.require(c.haptics.moment_limit == 20.0, "moment saturation");
  o.detail << "13 defaults checked";
}

void bumpless(Outcome& o) {
  const TeleopConfig cfg;
  const MappingGains& g = cfg.retarget.gains;
  const double dt = cfg.timing.control_dt;
  const auto t0 = std::chrono::steady_clock::now();
  int switches = 0;
  double worst_sag = 0.0, worst_yaw_excess = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RobotState robot;
    robot.x = uniform(-5, 5);
    robot.phi = uniform(-3, 3);
    ModeState st;
    st.mode_s = Mode::D;
    st.mode_y = Mode::D;
    st.x_R_des = robot.x;
    PilotInput prev;
    prev.u_s = prev.u_y = Mode::D;
    double theta = 0.0, phi = 0.0;
    for (int tick = 0; tick < 200; ++tick) {
      PilotInput in = prev;
      theta = std::clamp(theta + uniform(-0.02, 0.02), -0.3, 0.3);
      phi = std::clamp(phi + uniform(-0.05, 0.05), -M_PI / 3, M_PI / 3);
      in.theta_H = theta;
      in.phi_H = phi;
      if (uniform(0, 1) < 0.05) in.u_s = in.u_s == Mode::D ? Mode::P : Mode::D;
      if (uniform(0, 1) < 0.05) in.u_y = in.u_y == Mode::D ? Mode::P : Mode::D;
      in = ingest_pilot_input(in, cfg.retarget.limits);

      // robot wanders between ticks
      robot.x += uniform(-0.01, 0.01);
      robot.xdot = uniform(-0.5, 0.5);
      robot.phi += uniform(-0.02, 0.02);

      const bool to_p_s = in.u_s == Mode::P && st.mode_s == Mode::D;
      const bool to_p_y = in.u_y == Mode::P && st.mode_y == Mode::D;
      if (in.u_s != st.mode_s) st = transition_sagittal(st, robot, in.u_s);
      if (in.u_y != st.mode_y) st = transition_yaw(st, robot, prev, in.u_y, g);
      auto [sag, s1] = pi_s(in, st, g, cfg.physical, dt);
      s1 = limit_position_error(s1, robot.x, cfg.retarget.position_error_limit);
      auto [yaw, s2] = pi_y(in, s1, g);
      st = s2;
      if (to_p_s) {
        ++switches;
        worst_sag = std::max(worst_sag, std::abs(std::get<VelocitySetpoint>(sag).x_des - robot.x));
      }
      if (to_p_y) {
        ++switches;
        const double jump = std::abs(std::get<YawPositionSetpoint>(yaw).phi_des - robot.phi);
        const double bound = g.k_y * std::abs(in.phi_H - prev.phi_H);
        worst_yaw_excess = std::max(
            worst_yaw_excess, jump - bound - 8 * std::numeric_limits<double>::epsilon() *
                                                 std::max(1.0, std::abs(robot.phi)));
      }
      prev = in;
    }
  }
  o.require(worst_sag == 0.0, "sagittal error at first P tick");
  o.require(worst_yaw_excess <= 0.0, "yaw jump bound");
  o.require(switches > 100, "enough D->P switches");
  o.require(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0,
            "runtime");
  o.detail << switches << " D->P switches, max sagittal error " << worst_sag
           << ", max yaw jump excess " << worst_yaw_excess;
}

void yaw_identity(Outcome& o) {
  const TeleopConfig cfg;
  const MappingGains& g = cfg.retarget.gains;
  const PhysicalParams& p = cfg.physical;
  double worst = 0.0, worst_plant = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double phi_H = uniform(-M_PI / 3, M_PI / 3);
    const double tau = yaw_ff_torque(phi_H, g, p);
    worst = std::max(worst, std::abs(yaw_acceleration(tau, 0.0, p) - g.k_m * phi_H));
    RobotState s;
    s.phidot = uniform(-1, 1);
    const double h = 1e-3;
    const RobotState n = yaw_diffdrive_dynamics(s, tau, 0.0, p, h);
    worst_plant = std::max(worst_plant, std::abs((n.phidot - s.phidot) / h - g.k_m * phi_H));
  }
  o.require(worst < 1e-12, "identity");
  o.require(worst_plant < 1e-9, "plant integration");
  o.detail << "max |phiddot - k_m phi_H| " << worst << " (plant step " << worst_plant << ")";
}

void lqr(Outcome& o) {
  TeleopConfig cfg;
  const PhysicalParams& p = cfg.physical;
  const ControllerGains gains = synthesize(cfg.control, p);
  const LinearModel lin = cartpole_linear_dynamics(p);
  const CareSolution s = solve_care(lin.A, lin.B, Eigen::MatrixXd(gains.lqr_Q_diag.asDiagonal()),
                                    Eigen::MatrixXd::Constant(1, 1, gains.lqr_R));
  const double re = (lin.A - lin.B * s.K).eigenvalues().real().maxCoeff();
  o.require(s.residual < 1e-8, "CARE residual");
  o.require(re < 0.0, "closed-loop stability");

  RobotState st;
  ModeState modes;
  PilotInput in;
  in.theta_H = 0.15 / cfg.retarget.gains.k_v;
  double last_out = 0.0;
  for (int tick = 0; tick < 1200; ++tick) {
    const auto [sp, next] = pi_s(in, modes, cfg.retarget.gains, p, cfg.timing.control_dt);
    modes = limit_position_error(next, st.x, cfg.retarget.position_error_limit);
    const double u = std::clamp(
        velocity_mode_control(st, std::get<VelocitySetpoint>(sp), gains.K_vel),
        -cfg.limits.wheel_force, cfg.limits.wheel_force);
    for (int k = 0; k < cfg.timing.physics_substeps; ++k) {
      st = cartpole_nonlinear_step(st, u, 0.0, cfg.timing.physics_dt(), p);
    }
    if (std::abs(st.xdot - 0.15) > 0.05 * 0.15) last_out = (tick + 1) * cfg.timing.control_dt;
  }
  o.require(last_out < 3.0, "0.15 m/s step settles within 3 s");
  o.detail << "residual " << s.residual << ", max Re(eig) " << re << ", settled to 5% at "
           << last_out << " s";
}

void dcm_mode(Outcome& o) {
  TeleopConfig cfg;
  const PhysicalParams& p = cfg.physical;
  const ControllerGains gains = synthesize(cfg.control, p);
  int unequal = 0;
  for (int i = 0; i < 1000; ++i) {
    RobotState a;
    a.theta = uniform(-0.3, 0.3);
    a.thetadot = uniform(-1, 1);
    a.xdot = uniform(-2, 2);
    RobotState b = a;
    b.x = uniform(-100, 100);
    const double xi = uniform(-0.2, 0.2);
    if (dcm_mode_control(a, xi, gains.K_DCM, p) != dcm_mode_control(b, xi, gains.K_DCM, p)) ++unequal;
  }
  o.require(unequal == 0, "x-invariance");

  const double xi_des = 0.05;
  RobotState st;
  double settled = 0.0;
  for (int tick = 0; tick < 600; ++tick) {
    const double u = std::clamp(dcm_mode_control(st, xi_des, gains.K_DCM, p),
                                -cfg.limits.wheel_force, cfg.limits.wheel_force);
    for (int k = 0; k < cfg.timing.physics_substeps; ++k) {
      st = cartpole_nonlinear_step(st, u, 0.0, cfg.timing.physics_dt(), p);
    }
    const double xi = dcm(st.theta, st.thetadot, p.omega_R()).xi;
    if (std::abs(xi - xi_des) > 0.02 * xi_des) settled = (tick + 1) * cfg.timing.control_dt;
  }
  o.require(settled <= 2.0, "xi converges within 2 s");
  o.detail << unequal << " of 1000 translated outputs differ; xi within 2% from " << settled << " s";
}

void null_space(Outcome& o) {
  const PhysicalParams p;
  double worst = 0.0;
  int tested = 0;
  while (tested < 1000) {
    const ArmModel arm = p.mounted_arm(tested % 2 ? Side::Right : Side::Left);
    const Vec4 q = random_q(arm);
    const Mat34 J = arm_jacobian(q, arm);
    if (sigma_min(J) < 1e-2) continue;
    ++tested;
    const NullSpaceProjector ns = null_space_projector(q, arm);
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = uniform(-10, 10);
    worst = std::max(worst, (J * arm_mass_matrix(q, arm).ldlt().solve(ns.P * v)).norm() / v.norm());
  }
  o.require(worst < 1e-8, "null-space leakage");
  o.detail << "max |J M^-1 P v| / |v| " << worst << " over " << tested << " samples";
}

void impedance(Outcome& o) {
  TeleopConfig cfg;
  const PhysicalParams& p = cfg.physical;
  ControllerGains gains = synthesize(cfg.control, p);
  gains.null_space_task = false;
  double worst = 0.0;
  for (Side side : kSides) {
    const ArmModel arm = p.mounted_arm(side);
    const Vec4 q = side == Side::Left ? Vec4(0.1, M_PI / 2 - 0.4, 0.2, 0.8)
                                      : Vec4(-0.1, M_PI / 2 - 0.4, -0.2, 0.8);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 delta = Vec3::Zero();
      delta[axis] = 0.01;
      const ImpedanceResult r =
          impedance_control(q, Vec4::Zero(), arm_fk(q, arm) + delta, q, arm, gains, p.g);
      const Mat34 J = arm_jacobian(q, arm);
      const Vec3 F = (J * J.transpose()).ldlt().solve(J * (r.tau - arm_gravity(q, arm, p.g)));
      const Vec3 expected = gains.K_x.cwiseProduct(delta);
      worst = std::max(worst, (F - expected).norm() / expected.norm());
    }
  }
  o.require(worst < 0.01, "static force within 1%");
  o.detail << "max relative force error " << worst;
}

void kinematics(Outcome& o) {
  const ArmModel robot = ArmModel::robot_default();
  ArmModel human = ArmModel::human_default();
  human.shoulder_rotation =
      Eigen::AngleAxisd(0.3, Vec3::UnitY()).toRotationMatrix() * human.shoulder_rotation;
  ArmModel wide = robot;
  wide.q_max[3] = M_PI;
  double worst_dir = 0.0;
  int tested = 0;
  while (tested < 10000) {
    const Vec4 qh(uniform(-M_PI, M_PI), uniform(0, M_PI), uniform(-M_PI, M_PI), uniform(0, 2.6));
    const IkResult r = arm_ik_spherical(qh, human, wide);
    if (r.singular) continue;
    ++tested;
    worst_dir = std::max(worst_dir,
                         (arm_elbow_direction(r.q, wide) - arm_elbow_direction(qh, human)).norm());
  }

  const double hj = 1e-6, hg = 1e-5;
  double worst_j = 0.0, worst_g = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Vec4 q = random_q(robot);
    const Mat34 J = arm_jacobian(q, robot);
    const Vec4 G = arm_gravity(q, robot);
    for (int j = 0; j < 4; ++j) {
      Vec4 e = Vec4::Zero();
      e[j] = hj;
      const Vec3 fd = (arm_fk(q + e, robot) - arm_fk(q - e, robot)) / (2 * hj);
      worst_j = std::max(worst_j, (fd - J.col(j)).cwiseAbs().maxCoeff());
      e[j] = hg;
      const double fg =
          (arm_potential_energy(q + e, robot) - arm_potential_energy(q - e, robot)) / (2 * hg);
      worst_g = std::max(worst_g, std::abs(fg - G[j]));
    }
  }
  o.require(worst_dir <= 1e-9, "IK direction");
  o.require(worst_j < 1e-6, "Jacobian finite difference");
  o.require(worst_g < 1e-6, "gravity finite difference");
  o.detail << "direction " << worst_dir << " over " << tested << ", Jacobian FD " << worst_j
           << ", gravity FD " << worst_g;
}

void two_body(Outcome& o) {
  const PhysicalParams p;
  FeedbackConfig cfg;
  cfg.enable_ff_moment = true;
  cfg.enable_moment_fb = true;
  cfg.include_robot_moment = true;
  cfg.K_fb = 1.0;  // unscaled contact moment
  double worst = 0.0;
  for (int run = 0; run < 10; ++run) {
    double rate_R = 0.0, rate_H = 0.0;
    for (int tick = 0; tick < 100; ++tick) {
      const YawBodyAccelerations a =
          yaw_body_accelerations(uniform(-3, 3), uniform(-1, 1), uniform(-2, 2), p, cfg);
      worst = std::max(worst, std::abs(a.robot - a.human));
      rate_R += a.robot * 0.005;
      rate_H += a.human * 0.005;
    }
    worst = std::max(worst, std::abs(rate_R - rate_H) / 0.5);
  }
  o.require(worst < 1e-10, "acceleration mismatch");
  o.detail << "max |phiddot_R - phiddot_H| " << worst;
}

void contact_machine(Outcome& o) {
  const double dt = 0.005;
  ContactState st;
  int commits = 0;
  Contact last = st.committed;
  bool left = false, right = false;
  int hold = 0;
  for (int tick = 0; tick < 12000; ++tick) {  // 60 s
    if (hold <= 0) {
      const int from = static_cast<int>(contact_from(left, right));
      const int to = (from + 1 + static_cast<int>(uniform(0, 3))) % 4;
      left = (to & 1) != 0;
      right = (to & 2) != 0;
      hold = 1 + static_cast<int>(uniform(0, 10));  // under the dwell
    }
    --hold;
    st = contact_machine_step(left, right, st, dt);
    if (st.committed != last) {
      ++commits;
      last = st.committed;
    }
  }
  o.require(commits == 0, "chatter commits");

  // 60 ms of a stable raw state from rest
  ContactState s2;
  int commit_tick = -1;
  for (int tick = 1; tick <= 12; ++tick) {
    s2 = contact_machine_step(true, false, s2, dt);
    if (commit_tick < 0 && s2.committed == Contact::Left) commit_tick = tick;
  }
  const int boundary = static_cast<int>(std::ceil(0.055 / dt - 1e-9));
  o.require(commit_tick == boundary, "commits at the dwell boundary");
  o.detail << commits << " commits under 60 s chatter; stable state committed on tick "
           << commit_tick << " (55 ms boundary " << boundary << ")";
}

void moment_oracle(Outcome& o) {
  const PhysicalParams p;
  const PerArm<ArmModel> arms{p.mounted_arm(Side::Left), p.mounted_arm(Side::Right)};
  double worst = 0.0;
  int tested = 0;
  while (tested < 1000) {
    PerArm<Mat34> J;
    PerArm<Vec4> tau;
    PerArm<Vec3> r, F;
    bool ok = true;
    for (std::size_t i = 0; i < 2; ++i) {
      J[i] = arm_jacobian(random_q(arms[i]), arms[i]);
      if (sigma_min(J[i]) < 1e-2) ok = false;
      F[i] = random_vec3(30.0);
      tau[i] = J[i].transpose() * F[i];
      r[i] = random_vec3(0.6);
    }
    if (!ok) continue;
    ++tested;
    const auto c = static_cast<Contact>(tested % 4);
    Vec3 brute = Vec3::Zero();
    for (std::size_t i = 0; i < 2; ++i) {
      if (!in_contact(c, static_cast<Side>(i))) continue;
      brute += Vec3(r[i].y() * F[i].z() - r[i].z() * F[i].y(),
                    r[i].z() * F[i].x() - r[i].x() * F[i].z(),
                    r[i].x() * F[i].y() - r[i].y() * F[i].x());
    }
    const Vec3 est = estimate_external_moment(c, tau, J, r).M;
    worst = std::max(worst, (est - brute).norm() / std::max(1.0, brute.norm()));
  }
  o.require(worst < 1e-12, "oracle agreement");
  o.detail << "max scaled error " << worst << " over " << tested << " cases";
}

void box_slotting(Outcome& o) {
  const TeleopConfig cfg = load_config("");
  for (const char* name : {"box_slot_1", "box_slot_2"}) {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc;
    const Evaluation e = evaluate_scenario(run_named(name, cfg, &sc));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(e.has_predicate && e.success, std::string(name) + " success");
    o.require(secs < 60.0, std::string(name) + " runtime");
    o.detail << name << " (" << sc.box.mass << " kg) success=" << (e.success ? "true" : "false")
             << " at " << e.completion_time << " s in " << secs << " s wall; ";
  }

  int moved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    BoxBody box;
    box.mass = uniform(5.0, 10.5);
    box.pose = Pose2(uniform(-2, 2), uniform(-2, 2), uniform(-1, 1));
    const Pose2 start = box.pose;
    const double lift = uniform(0.0, 30.0);
    const double limit = box_stiction_threshold(box, lift);
    for (int k = 0; k < 500; ++k) {
      const double mag = uniform(0.0, 0.999) * limit;
      const double dir = uniform(-M_PI, M_PI);
      const double mz = uniform(-0.999, 0.999) * limit * box.friction_radius();
      box = box_step(box, Vec3(mag * std::cos(dir), mag * std::sin(dir), mz), lift, 9.81, 0.001).box;
    }
    if (!(box.pose == start) || !(box.velocity == Pose2::Zero())) ++moved;
  }
  o.require(moved == 0, "stiction exactness");
  o.detail << moved << " of 200 sub-threshold boxes moved";
}

void hrc(Outcome& o) {
  const TeleopConfig cfg = load_config("");
  const RunLog f = run_named("hrc_follower", cfg);
  const Evaluation ef = evaluate_scenario(f);
  o.require(ef.max_abs_theta < 0.3, "follower pitch");
  o.require(ef.base_travel > 0.1, "follower base travel");

  // over each constant-force segment the base speed changes with the force sign
  int segments = 0, agree = 0;
  std::size_t start = 0;
  for (std::size_t r = 1; r <= f.rows.size(); ++r) {
    const double fx = f.at(start, "agent_fx");
    if (r < f.rows.size() && f.at(r, "agent_fx") == fx) continue;
    if (fx != 0.0) {
      ++segments;
      const double dv = f.at(r - 1, "xdot") - f.at(start, "xdot");
      if (dv * fx > 0.0) ++agree;
    }
    start = r;
  }
  o.require(segments > 0 && agree == segments, "base follows the agent");

  const double P = steady_abs_mean(run_named("hrc_hold_p", cfg), "F_ext_x", 1.0);
  const double D = steady_abs_mean(run_named("hrc_hold_d", cfg), "F_ext_x", 1.0);
  o.require(P > 1.0, "P-mode force against the agent");
  o.require(P >= 2.0 * D, "P vs D ratio");
  o.detail << "follower max|theta| " << ef.max_abs_theta << " rad, travel " << ef.base_travel
           << " m, " << agree << "/" << segments << " push segments followed; hold force P "
           << P << " N vs D " << D << " N";
}

void determinism(Outcome& o) {
  const TeleopConfig cfg = load_config("");
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(kFixtures) / "scenarios")) {
    const Scenario sc = load_scenario(entry.path().string());
    if (sc.trace.empty()) continue;
    const RunLog log = run_scenario(sc, cfg, trace_pilot(read_trace(sc.trace)));
    const RunLog again = replay(parse_log(format_log(log)));
    const LogMismatch m = compare_state_columns(log, again);
    o.require(m.identical, sc.name + " replay");
    ++checked;
  }
  for (const auto& entry : fs::directory_iterator(fs::path(kFixtures) / "logs")) {
    const RunLog log = read_log(entry.path().string());
    const LogMismatch m = compare_state_columns(log, replay(log));
    o.require(m.identical, entry.path().filename().string() + " replay");
    ++checked;
  }
  o.detail << checked << " fixtures replayed bit for bit";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Check>> criteria = {
      {"constant fidelity", constants},
      {"bumpless transfers", bumpless},
      {"yaw feedforward acceleration identity", yaw_identity},
      {"LQR synthesis and velocity tracking", lqr},
      {"DCM mode invariance and convergence", dcm_mode},
      {"null-space property", null_space},
      {"impedance static force", impedance},
      {"IK direction and finite differences", kinematics},
      {"two-body yaw acceleration identity", two_body},
      {"contact machine debounce", contact_machine},
      {"external moment oracle", moment_oracle},
      {"box slotting", box_slotting},
      {"human-robot collaboration", hrc},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str(),
                secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
