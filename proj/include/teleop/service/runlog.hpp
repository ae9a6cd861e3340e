#pragma once

#include "teleop/service/config.hpp"
#include "teleop/service/scenario.hpp"
#include "teleop/service/session.hpp"

#include <functional>
#include <string>
#include <vector>

namespace teleop {

inline constexpr int kLogVersion = 1;

enum class ColumnGroup { Tick, Pilot, State };

struct LogColumn {
  std::string name;
  std::string unit;
  std::string description;
  ColumnGroup group;
  std::function<double(const TickRecord&)> get;
};

// Every column of a run log, in file order.
const std::vector<LogColumn>& log_columns();
std::size_t log_column_index(const std::string& name);

// Markdown column dictionary (docs/log-format.md is generated from this).
std::string log_column_dictionary();

struct RunLog {
  KeyValues scenario;
  KeyValues config;
  std::vector<std::vector<double>> rows;  // one per tick, log_columns() order
  int fault_tick = -1;                    // first safe-stop tick, -1 if none
  std::string fault_reason;

  void append(const TickRecord& rec);
  double at(std::size_t row, const std::string& column) const;
  PilotInput pilot(std::size_t row) const;
  bool fault(std::size_t row) const;
};

std::string format_log(const RunLog& log);
// Throws std::invalid_argument on a version mismatch, a malformed or
// truncated file, or non-consecutive ticks.
RunLog parse_log(const std::string& text, const std::string& origin = "<log>");
RunLog read_log(const std::string& path);
void write_log(const RunLog& log, const std::string& path);

// Header blocks rebuilt into runnable objects.
Scenario log_scenario(const RunLog& log);
TeleopConfig log_config(const RunLog& log);

}  // namespace teleop
