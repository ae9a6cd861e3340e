#include "teleop/service/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace teleop {

PilotSource trace_pilot(PilotTrace trace) {
  if (trace.rows.empty()) throw std::invalid_argument("empty trace");
  return [trace = std::move(trace)](const Session& s) -> std::optional<PilotInput> {
    return trace_input(trace, s.tick());
  };
}

RunLog log_header(const Session& session) {
  RunLog log;
  log.scenario = scenario_to_key_values(session.scenario());
  log.config = session.config().to_key_values();
  return log;
}

RunLog run_session(Session& session, const PilotSource& pilot, const std::string& fault_reason) {
  RunLog log = log_header(session);
  log.rows.reserve(static_cast<std::size_t>(session.total_ticks() - session.tick()));
  while (!session.done()) {
    std::optional<PilotInput> in;
    if (!session.faulted()) in = pilot(session);
    const TickRecord rec = in ? session.step(*in) : session.safe_stop_step();
    if (rec.fault && log.fault_tick < 0) log.fault_reason = fault_reason;
    log.append(rec);
  }
  return log;
}

RunLog run_scenario(const Scenario& scenario, const TeleopConfig& cfg, const PilotSource& pilot) {
  Session session(scenario, cfg);
  return run_session(session, pilot);
}

double low_pass_factor(double cutoff_hz, double dt) {
  const double tau = 1.0 / (2.0 * M_PI * cutoff_hz);
  return dt / (dt + tau);
}

LiveInput::LiveInput(const SessionTiming& timing, PilotInput initial)
    : timing_(timing),
      smoothing_(low_pass_factor(timing.rate_cutoff_hz, timing.control_dt)),
      held_(initial),
      thetadot_(initial.thetadot_H),
      phidot_(initial.phidot_H) {}

void LiveInput::receive(const PilotInput& in) { pending_ = in; }

std::optional<PilotInput> LiveInput::next() {
  if (faulted_) return std::nullopt;
  if (pending_) {
    held_ = *pending_;
    pending_.reset();
    gap_ = 0;
  } else if (++gap_ > timing_.live_gap_ticks) {
    faulted_ = true;
    return std::nullopt;
  }
  thetadot_ += smoothing_ * (held_.thetadot_H - thetadot_);
  phidot_ += smoothing_ * (held_.phidot_H - phidot_);
  PilotInput out = held_;
  out.thetadot_H = thetadot_;
  out.phidot_H = phidot_;
  return out;
}

RunLog replay(const RunLog& log) {
  Session session(log_scenario(log), log_config(log));
  if (static_cast<std::size_t>(session.total_ticks()) != log.rows.size()) {
    throw std::invalid_argument("log has " + std::to_string(log.rows.size()) +
                                " ticks, scenario expects " + std::to_string(session.total_ticks()));
  }
  RunLog out = log_header(session);
  out.rows.reserve(log.rows.size());
  for (std::size_t r = 0; r < log.rows.size(); ++r) {
    const TickRecord rec = log.fault(r) ? session.safe_stop_step() : session.step(log.pilot(r));
    if (rec.fault && out.fault_tick < 0) out.fault_reason = log.fault_reason;
    out.append(rec);
  }
  return out;
}

LogMismatch compare_state_columns(const RunLog& a, const RunLog& b) {
  LogMismatch m;
  const auto& cols = log_columns();
  const std::size_t n = std::max(a.rows.size(), b.rows.size());
  for (std::size_t r = 0; r < n; ++r) {
    if (r >= a.rows.size() || r >= b.rows.size()) {
      m.identical = false;
      m.row = r;
      m.column = "tick";
      return m;
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].group == ColumnGroup::Pilot) continue;
      if (std::memcmp(&a.rows[r][c], &b.rows[r][c], sizeof(double)) != 0) {
        m.identical = false;
        m.row = r;
        m.column = cols[c].name;
        return m;
      }
    }
  }
  return m;
}

Evaluation evaluate_scenario(const RunLog& log) {
  const Scenario sc = log_scenario(log);
  Evaluation e;
  e.has_predicate = sc.has_success_predicate();
  e.ticks = static_cast<int>(log.rows.size());
  e.fault = log.fault_tick >= 0;
  if (log.rows.empty()) return e;

  const std::size_t i_t = log_column_index("t");
  const std::size_t i_bx = log_column_index("box_x");
  const std::size_t i_by = log_column_index("box_y");
  const std::size_t i_byaw = log_column_index("box_yaw");
  const std::size_t i_wall = log_column_index("wall_force");
  const std::size_t i_theta = log_column_index("theta");
  const std::size_t i_base = log_column_index("base_x");
  const std::size_t i_mode[3] = {log_column_index("mode_s"), log_column_index("mode_y"),
                                 log_column_index("mode_A")};
  const std::size_t i_hl = log_column_index("hand_force_lx");
  const std::size_t i_hr = log_column_index("hand_force_rx");
  int* switches[3] = {&e.switches_s, &e.switches_y, &e.switches_A};
  const double dt = log_config(log).timing.control_dt;
  const double base0 = log.rows.front()[i_base];

  for (std::size_t r = 0; r < log.rows.size(); ++r) {
    const auto& row = log.rows[r];
    if (r > 0) {
      for (int k = 0; k < 3; ++k) {
        if (row[i_mode[k]] != log.rows[r - 1][i_mode[k]]) ++*switches[k];
      }
    }
    const double fl = std::hypot(row[i_hl], row[i_hl + 1], row[i_hl + 2]);
    const double fr = std::hypot(row[i_hr], row[i_hr + 1], row[i_hr + 2]);
    e.peak_hand_force_l = std::max(e.peak_hand_force_l, fl);
    e.peak_hand_force_r = std::max(e.peak_hand_force_r, fr);
    e.peak_wall_force = std::max(e.peak_wall_force, row[i_wall]);
    e.max_abs_theta = std::max(e.max_abs_theta, std::abs(row[i_theta]));
    e.base_travel = std::max(e.base_travel, std::abs(row[i_base] - base0));
    if (e.has_predicate && !e.success) {
      const Pose2 box(row[i_bx], row[i_by], row[i_byaw]);
      if (sc.slot.contains(box) && row[i_wall] > sc.success_wall_force) {
        e.success = true;
        e.completion_time = row[i_t] + dt;
      }
    }
  }
  const auto& last = log.rows.back();
  e.final_box_x = last[i_bx];
  e.final_box_y = last[i_by];
  e.final_box_yaw = last[i_byaw];
  return e;
}

KeyValues evaluation_to_key_values(const Evaluation& e) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  return {
      {"has_predicate", b(e.has_predicate)},
      {"success", b(e.success)},
      {"completion_time", format_double(e.completion_time)},
      {"ticks", std::to_string(e.ticks)},
      {"fault", b(e.fault)},
      {"switches_s", std::to_string(e.switches_s)},
      {"switches_y", std::to_string(e.switches_y)},
      {"switches_A", std::to_string(e.switches_A)},
      {"peak_hand_force_l", format_double(e.peak_hand_force_l)},
      {"peak_hand_force_r", format_double(e.peak_hand_force_r)},
      {"peak_wall_force", format_double(e.peak_wall_force)},
      {"max_abs_theta", format_double(e.max_abs_theta)},
      {"base_travel", format_double(e.base_travel)},
      {"final_box_x", format_double(e.final_box_x)},
      {"final_box_y", format_double(e.final_box_y)},
      {"final_box_yaw", format_double(e.final_box_yaw)},
  };
}

}  // namespace teleop
