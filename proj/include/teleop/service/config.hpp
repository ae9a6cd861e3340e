#pragma once

#include "teleop/control/controllers.hpp"
#include "teleop/core/params.hpp"
#include "teleop/haptics/haptics.hpp"
#include "teleop/retarget/retargeting.hpp"
#include "teleop/sim/world.hpp"

#include <map>
#include <string>
#include <vector>

namespace teleop {

// Flat `key = value` document. '#' starts a comment; blank lines are skipped.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text, const std::string& origin = "<text>");
KeyValues read_key_values(const std::string& path);
std::string format_key_values(const KeyValues& kv);

std::string format_double(double v);  // %.17g
double parse_double(const std::string& s, const std::string& key);
bool parse_bool(const std::string& s, const std::string& key);
std::vector<double> parse_list(const std::string& s, const std::string& key);

inline constexpr double kPhysicsDt = 0.001;  // s

struct SessionTiming {
  double control_dt = 0.005;  // s
  int physics_substeps = 5;
  int live_gap_ticks = 20;          // safe-stop after this many ticks without a pilot message
  double rate_cutoff_hz = 10.0;     // live pitch/yaw rate low-pass
  int telemetry_decimation = 4;     // 200 Hz loop -> 50 Hz telemetry
  double physics_dt() const { return control_dt / physics_substeps; }
  void validate() const;
};

struct TeleopConfig {
  PhysicalParams physical;
  RetargetConfig retarget;
  ControllerGains control;
  ActuatorLimits limits;
  FeedbackConfig haptics;
  ContactParams contact;
  SessionTiming timing;

  // Overrides fields from `kv`; unknown keys throw std::invalid_argument.
  void apply(const KeyValues& kv);
  KeyValues to_key_values() const;
  void validate() const;
};

// Defaults, then the file named by `path` (if non-empty), then the file named
// by TELEOP_CONFIG when `path` is empty and the variable is set.
TeleopConfig load_config(const std::string& path);

}  // namespace teleop
