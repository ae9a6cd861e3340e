#pragma once

#include "teleop/core/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace teleop {

// One named scalar of PilotInput. Shared by pilot traces, run logs and the
// wire schema so the three agree on names and order.
struct PilotField {
  const char* name;
  const char* unit;
  std::function<double(const PilotInput&)> get;
  std::function<void(PilotInput&, double)> set;
};

const std::vector<PilotField>& pilot_fields();

// Mode columns are stored as 0 (P) / 1 (D); anything else is rejected.
Mode mode_from_value(double v, const std::string& what);

inline constexpr int kTraceVersion = 1;

// Scripted pilot: one row per control tick. Row k is the exact input for
// tick k; a trace shorter than the run holds its last row.
struct PilotTrace {
  std::vector<PilotInput> rows;
};

std::string format_trace(const PilotTrace& trace);
PilotTrace parse_trace(const std::string& text, const std::string& origin = "<trace>");
PilotTrace read_trace(const std::string& path);
void write_trace(const PilotTrace& trace, const std::string& path);

const PilotInput& trace_input(const PilotTrace& trace, int tick);

// Splits a comma-separated line; no quoting.
std::vector<std::string> split_csv(const std::string& line);

}  // namespace teleop
