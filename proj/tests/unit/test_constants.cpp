#include "teleop/service/config.hpp"

#include <doctest.h>

#include <cmath>

using namespace teleop;

TEST_CASE("configuration defaults") {
  const TeleopConfig c;
  CHECK(c.retarget.gains.k_v == 3.0);
  CHECK(c.retarget.gains.k_y == 1.5);
  CHECK(c.retarget.gains.k_m == 25.0);
  CHECK(c.control.epsilon == 0.15);
  CHECK(c.haptics.K_fb == 0.5);
  CHECK(c.physical.I_zR == 0.1);
  CHECK(c.physical.I_zH == 0.3);
  CHECK(c.retarget.blend_span == 0.070);
  CHECK(c.haptics.contact_dwell == 0.055);
  CHECK(1.0 / c.timing.control_dt == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(c.timing.physics_dt() == doctest::Approx(kPhysicsDt).epsilon(1e-12));
  CHECK(c.retarget.limits.yaw_limit == M_PI / 3.0);
  CHECK(c.haptics.force_limit == 400.0);
  CHECK(c.haptics.moment_limit == 20.0);
}

TEST_CASE("defaults survive a dump and reload") {
  TeleopConfig c;
  c.apply(TeleopConfig{}.to_key_values());
  CHECK(c.to_key_values() == TeleopConfig{}.to_key_values());
}
