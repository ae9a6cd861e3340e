#include "teleop/core/arm.hpp"
#include "teleop/core/dcm.hpp"
#include "teleop/retarget/retargeting.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace teleop;
using teleop::testing::random_within_limits;
using teleop::testing::uniform;

namespace {

const PhysicalParams kParams;
const MappingGains kGains;
constexpr double kDt = 0.005;

PilotInput pilot(double theta, double thetadot = 0.0, double phi = 0.0, double phidot = 0.0) {
  PilotInput in;
  in.theta_H = theta;
  in.thetadot_H = thetadot;
  in.phi_H = phi;
  in.phidot_H = phidot;
  return in;
}

}  // namespace

TEST_CASE("pilot ingestion clamps to the HMI workspace") {
  const PilotLimits lim;
  const PilotInput out = ingest_pilot_input(pilot(0.9, 0.0, -2.0), lim);
  CHECK(out.theta_H == lim.pitch_limit);
  CHECK(out.phi_H == doctest::Approx(-M_PI / 3.0).epsilon(1e-15));
  PilotInput bad = pilot(0.0);
  bad.thetadot_H = std::nan("");
  CHECK_THROWS_AS(ingest_pilot_input(bad, lim), std::invalid_argument);
}

TEST_CASE("pi_s velocity mode") {
  ModeState st;
  st.x_R_des = 0.25;
  auto [sp0, st0] = pi_s(pilot(0.0), st, kGains, kParams, kDt);
  CHECK(std::get<VelocitySetpoint>(sp0).xdot_des == 0.0);
  CHECK(st0.x_R_des == 0.25);

  auto [sp1, st1] = pi_s(pilot(0.1), st, kGains, kParams, kDt);
  CHECK(std::get<VelocitySetpoint>(sp1).xdot_des == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(std::get<VelocitySetpoint>(sp1).x_des == 0.25);
  CHECK(st1.x_R_des == doctest::Approx(0.25 + 0.3 * kDt).epsilon(1e-15));

  // integral of a constant command over one second
  ModeState acc;
  for (int i = 0; i < 200; ++i) acc = pi_s(pilot(0.1), acc, kGains, kParams, kDt).second;
  CHECK(acc.x_R_des == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("pi_s DCM mode") {
  ModeState st;
  st.mode_s = Mode::D;
  st.x_R_des = 4.0;
  auto [sp, next] = pi_s(pilot(0.1, 0.2), st, kGains, kParams, kDt);
  CHECK(std::get<DcmSetpoint>(sp).xi_des == doctest::Approx(0.1638550856814101).epsilon(1e-14));
  // the integrator is frozen
  CHECK(next.x_R_des == 4.0);
}

TEST_CASE("transition_sagittal") {
  ModeState st;
  st.mode_s = Mode::D;
  st.x_R_des = -3.0;
  RobotState robot;
  robot.x = 1.7;
  const ModeState p = transition_sagittal(st, robot, Mode::P);
  CHECK(p.mode_s == Mode::P);
  CHECK(p.x_R_des == 1.7);

  const ModeState same = transition_sagittal(p, robot, Mode::P);
  CHECK(same.x_R_des == p.x_R_des);
  CHECK(same.mode_s == p.mode_s);

  RobotState moved = robot;
  moved.x = 9.0;
  const ModeState d = transition_sagittal(p, moved, Mode::D);
  CHECK(d.mode_s == Mode::D);
  CHECK(d.x_R_des == 1.7);
}

TEST_CASE("bumpless sagittal transfer over random trajectories") {
  for (int trial = 0; trial < 2000; ++trial) {
    ModeState st;
    st.mode_s = Mode::D;
    st.x_R_des = uniform(-10.0, 10.0);
    RobotState robot;
    robot.x = uniform(-50.0, 50.0);
    st = transition_sagittal(st, robot, Mode::P);
    st = limit_position_error(st, robot.x, 0.5);
    const auto [sp, next] = pi_s(pilot(uniform(-0.35, 0.35)), st, kGains, kParams, kDt);
    REQUIRE(std::get<VelocitySetpoint>(sp).x_des - robot.x == 0.0);
  }
}

TEST_CASE("position error limit") {
  ModeState st;
  st.x_R_des = 3.0;
  CHECK(limit_position_error(st, 1.0, 0.5).x_R_des == 1.5);
  CHECK(limit_position_error(st, 5.0, 0.5).x_R_des == 4.5);
  CHECK(limit_position_error(st, 2.8, 0.5).x_R_des == 3.0);
}

TEST_CASE("pi_y") {
  ModeState st;
  auto [sp0, s0] = pi_y(pilot(0.0), st, kGains);
  CHECK(std::get<YawPositionSetpoint>(sp0).phi_des == 0.0);

  st.phi_offset = 0.5;
  auto [sp1, s1] = pi_y(pilot(0.0, 0.0, 0.2, 0.4), st, kGains);
  CHECK(std::get<YawPositionSetpoint>(sp1).phi_des == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(std::get<YawPositionSetpoint>(sp1).phidot_des == doctest::Approx(0.6).epsilon(1e-15));

  st.mode_y = Mode::D;
  auto [sp2, s2] = pi_y(pilot(0.0, 0.0, 0.2), st, kGains);
  CHECK(std::get<YawAccelerationSetpoint>(sp2).phiddot_des == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("transition_yaw") {
  ModeState st;
  st.mode_y = Mode::D;
  RobotState robot;
  robot.phi = 2.0;
  const ModeState p = transition_yaw(st, robot, pilot(0.0, 0.0, 0.2), Mode::P, kGains);
  CHECK(p.phi_offset == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(transition_yaw(st, robot, pilot(0.0), Mode::P, kGains).phi_offset == 2.0);

  const ModeState again = transition_yaw(p, robot, pilot(0.0, 0.0, -0.3), Mode::P, kGains);
  CHECK(again.phi_offset == p.phi_offset);
}

TEST_CASE("bumpless yaw transfer over random trajectories") {
  for (int trial = 0; trial < 2000; ++trial) {
    ModeState st;
    st.mode_y = Mode::D;
    RobotState robot;
    robot.phi = uniform(-20.0, 20.0);
    const PilotInput before = pilot(0.0, 0.0, uniform(-M_PI / 3, M_PI / 3));
    st = transition_yaw(st, robot, before, Mode::P, kGains);

    // same pilot sample: setpoint lands on the robot yaw to rounding
    const double same = std::get<YawPositionSetpoint>(pi_y(before, st, kGains).first).phi_des;
    REQUIRE(std::abs(same - robot.phi) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                              std::max(1.0, std::abs(robot.phi)));

    // moved pilot: jump equals k_y times the pilot's step
    PilotInput after = before;
    after.phi_H = std::clamp(before.phi_H + uniform(-0.05, 0.05), -M_PI / 3, M_PI / 3);
    const double jump = std::get<YawPositionSetpoint>(pi_y(after, st, kGains).first).phi_des -
                        robot.phi;
    REQUIRE(jump == doctest::Approx(kGains.k_y * (after.phi_H - before.phi_H)).epsilon(1e-9).scale(
                        std::max(1.0, std::abs(robot.phi))));
  }
}

TEST_CASE("yaw P range follows the clamped pilot yaw") {
  const PilotLimits lim;
  for (int trial = 0; trial < 1000; ++trial) {
    ModeState st;
    st.phi_offset = uniform(-3.0, 3.0);
    const PilotInput in = ingest_pilot_input(pilot(0.0, 0.0, uniform(-4.0, 4.0)), lim);
    const double phi_des = std::get<YawPositionSetpoint>(pi_y(in, st, kGains).first).phi_des;
    REQUIRE(std::abs(phi_des - st.phi_offset) <= kGains.k_y * M_PI / 3.0 + 1e-12);
  }
}

TEST_CASE("pi_A") {
  const ArmModels models = ArmModels::from(kParams);
  ModeState st;
  PilotInput in;
  in.q_aH = {Vec4::Zero(), Vec4::Zero()};

  auto [sp, next] = pi_A(in, models, st);
  for (Side s : kSides) {
    const std::size_t i = idx(s);
    CHECK(sp.singular[i]);
    CHECK((sp.x_des[i] - arm_fk(Vec4::Zero(), models.robot[i])).norm() < 1e-12);
    CHECK(sp.x_des[i].z() < models.robot[i].shoulder_position.z());
  }

  // identical models reproduce the human elbow direction, per arm
  ArmModels same = models;
  same.human = models.robot[0];
  for (int trial = 0; trial < 500; ++trial) {
    PilotInput r;
    r.q_aH = {random_within_limits(same.human), random_within_limits(same.human)};
    ModeState st2;
    st2.mode_A = Mode::D;
    const auto out = pi_A(r, same, st2);
    REQUIRE(out.first.mode == Mode::D);
    for (Side s : kSides) {
      const std::size_t i = idx(s);
      REQUIRE((out.first.x_des[i] - arm_fk(out.first.q_des[i], same.robot[i])).norm() == 0.0);
      REQUIRE(out.second.ik_q0[i] == out.first.q_des[i][0]);
      if (out.first.singular[i]) continue;  // q0 is held inside the cone
      const Vec3 want = arm_elbow_direction(r.q_aH[i], same.human);
      const Vec3 got = arm_elbow_direction(out.first.q_des[i], same.robot[i]);
      REQUIRE((want - got).norm() < 1e-9);
    }
  }
}

TEST_CASE("blend_step") {
  ModeState st;
  st.mode_A = Mode::D;
  CHECK(blend_step(st, 0.035).alpha == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.alpha_rate(0.070) == doctest::Approx(1.0 / 0.070));

  ModeState full = st;
  full.alpha = 1.0;
  CHECK(blend_step(full, kDt).alpha == 1.0);
  CHECK(full.alpha_rate(0.070) == 0.0);

  ModeState ramp = st;
  for (int i = 0; i < 13; ++i) {
    ramp = blend_step(ramp, kDt);
    REQUIRE(ramp.alpha < 1.0);
  }
  ramp = blend_step(ramp, kDt);
  CHECK(ramp.alpha == 1.0);

  ramp = transition_arm(ramp, Mode::P);
  CHECK(ramp.alpha_rate(0.070) == doctest::Approx(-1.0 / 0.070));
  for (int i = 0; i < 14; ++i) ramp = blend_step(ramp, kDt);
  CHECK(ramp.alpha == 0.0);

  CHECK_THROWS_AS(blend_step(st, 0.0), std::invalid_argument);
}

TEST_CASE("blend is bounded, piecewise linear and slow") {
  ModeState st;
  std::vector<double> trace;
  for (int i = 0; i < 4000; ++i) {
    if (uniform(0.0, 1.0) < 0.05) st = transition_arm(st, st.mode_A == Mode::P ? Mode::D : Mode::P);
    const double before = st.alpha;
    st = blend_step(st, kDt);
    REQUIRE(st.alpha >= 0.0);
    REQUIRE(st.alpha <= 1.0);
    REQUIRE(std::abs(st.alpha - before) <= kDt / 0.070 + 1e-12);
    trace.push_back(st.alpha);
  }
  // total variation over any 70 ms window (14 steps)
  for (std::size_t i = 14; i < trace.size(); ++i) {
    double tv = 0.0;
    for (std::size_t j = i - 13; j <= i; ++j) tv += std::abs(trace[j] - trace[j - 1]);
    REQUIRE(tv <= 1.0 + 1e-12);
  }
}

TEST_CASE("mode switches are idempotent") {
  for (int trial = 0; trial < 500; ++trial) {
    ModeState st;
    st.mode_s = uniform(0, 1) < 0.5 ? Mode::P : Mode::D;
    st.mode_y = uniform(0, 1) < 0.5 ? Mode::P : Mode::D;
    st.x_R_des = uniform(-1, 1);
    st.phi_offset = uniform(-1, 1);
    RobotState robot;
    robot.x = uniform(-5, 5);
    robot.phi = uniform(-3, 3);
    const PilotInput in = pilot(0.0, 0.0, uniform(-1, 1));
    const Mode target = uniform(0, 1) < 0.5 ? Mode::P : Mode::D;

    ModeState once = transition_yaw(transition_sagittal(st, robot, target), robot, in, target, kGains);
    RobotState moved = robot;
    moved.x += 1.0;
    moved.phi += 1.0;
    ModeState twice = transition_yaw(transition_sagittal(once, moved, target), moved, in, target, kGains);
    REQUIRE(twice.x_R_des == once.x_R_des);
    REQUIRE(twice.phi_offset == once.phi_offset);
    REQUIRE(twice.mode_s == once.mode_s);
    REQUIRE(twice.mode_y == once.mode_y);
  }
}
