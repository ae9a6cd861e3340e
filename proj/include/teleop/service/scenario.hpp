#pragma once

#include "teleop/service/config.hpp"
#include "teleop/sim/world.hpp"

#include <string>

namespace teleop {

struct Scenario {
  std::string name = "unnamed";
  double duration = 10.0;  // s

  // initial robot state
  double base_x = 0.0;
  double base_y = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  PerArm<Vec4> arm_q{Vec4::Zero(), Vec4::Zero()};

  BoxBody box;
  Wall wall;
  SlotRegion slot;
  double success_wall_force = 5.0;  // N

  SharedObject object;
  ExternalAgent agent;

  std::string trace;  // pilot trace path, resolved against the scenario file

  // Adds `drift_amount` to the sagittal position target at `drift_time`.
  double drift_time = -1.0;
  double drift_amount = 0.0;

  bool has_success_predicate() const { return box.enabled && wall.enabled; }
  int ticks(double control_dt) const;
  void validate() const;
};

Scenario parse_scenario(const KeyValues& kv, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);
KeyValues scenario_to_key_values(const Scenario& s);

// Resolves a scenario name or path against the fixture directories.
std::string find_scenario(const std::string& name_or_path, const std::string& fixture_dir);

// Initial world for a scenario.
World make_world(const Scenario& s, const TeleopConfig& cfg);

std::string format_keyframes(const std::vector<Keyframe>& frames);
std::vector<Keyframe> parse_keyframes(const std::string& s, const std::string& key);

}  // namespace teleop
