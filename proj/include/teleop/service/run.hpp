#pragma once

#include "teleop/service/runlog.hpp"
#include "teleop/service/session.hpp"
#include "teleop/service/trace.hpp"

#include <functional>
#include <optional>
#include <string>

namespace teleop {

// Input for the session's next tick; nullopt requests a safe-stop.
using PilotSource = std::function<std::optional<PilotInput>(const Session&)>;

PilotSource trace_pilot(PilotTrace trace);

// Header blocks for a log of this session.
RunLog log_header(const Session& session);

// Runs the session to its end. After the first safe-stop every remaining
// tick is simulated with zero torques and flagged.
RunLog run_session(Session& session, const PilotSource& pilot,
                   const std::string& fault_reason = "pilot stream gap");
RunLog run_scenario(const Scenario& scenario, const TeleopConfig& cfg, const PilotSource& pilot);

// Live pilot stream: latest sample wins within a tick, zero-order hold
// between samples, first-order low-pass on the pitch and yaw rates, and a
// latched fault once the stream has been silent for more than the gap limit.
class LiveInput {
 public:
  LiveInput(const SessionTiming& timing, PilotInput initial);
  void receive(const PilotInput& in);
  std::optional<PilotInput> next();
  int gap_ticks() const { return gap_; }
  bool faulted() const { return faulted_; }

 private:
  SessionTiming timing_;
  double smoothing_;
  PilotInput held_;
  std::optional<PilotInput> pending_;
  double thetadot_ = 0.0;
  double phidot_ = 0.0;
  int gap_ = 0;
  bool faulted_ = false;
};

// Smoothing factor of a first-order low-pass sampled every dt.
double low_pass_factor(double cutoff_hz, double dt);

// Re-simulates a log from its own header and pilot columns.
RunLog replay(const RunLog& log);

struct LogMismatch {
  bool identical = true;
  std::size_t row = 0;
  std::string column;
};
// Bitwise comparison of the state columns.
LogMismatch compare_state_columns(const RunLog& a, const RunLog& b);

struct Evaluation {
  bool has_predicate = false;
  bool success = false;
  double completion_time = -1.0;  // s, first tick meeting the predicate
  int ticks = 0;
  bool fault = false;
  int switches_s = 0;
  int switches_y = 0;
  int switches_A = 0;
  double peak_hand_force_l = 0.0;
  double peak_hand_force_r = 0.0;
  double peak_wall_force = 0.0;
  double max_abs_theta = 0.0;
  double base_travel = 0.0;  // max |base_x - base_x(0)|
  double final_box_x = 0.0;
  double final_box_y = 0.0;
  double final_box_yaw = 0.0;
};

// Success: the box pose is inside the slot region while the wall pushes on
// it harder than the threshold, at some tick before the end of the log.
Evaluation evaluate_scenario(const RunLog& log);
KeyValues evaluation_to_key_values(const Evaluation& e);

}  // namespace teleop
