#include "teleop/service/trace.hpp"

#include "teleop/service/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace teleop {

namespace {

PilotField joint(const char* name, std::size_t arm, int j) {
  return PilotField{name, "rad", [arm, j](const PilotInput& p) { return p.q_aH[arm][j]; },
                    [arm, j](PilotInput& p, double v) { p.q_aH[arm][j] = v; }};
}

PilotField mode(const char* name, Mode PilotInput::*m) {
  return PilotField{name, "0=P 1=D",
                    [m](const PilotInput& p) { return static_cast<double>(p.*m); },
                    [m, name](PilotInput& p, double v) { p.*m = mode_from_value(v, name); }};
}

PilotField scalar(const char* name, const char* unit, double PilotInput::*f) {
  return PilotField{name, unit, [f](const PilotInput& p) { return p.*f; },
                    [f](PilotInput& p, double v) { p.*f = v; }};
}

const char* const kHeader = "# teleop-trace version=";

}  // namespace

const std::vector<PilotField>& pilot_fields() {
  static const std::vector<PilotField> fields = {
      scalar("theta_H", "rad", &PilotInput::theta_H),
      scalar("thetadot_H", "rad/s", &PilotInput::thetadot_H),
      scalar("phi_H", "rad", &PilotInput::phi_H),
      scalar("phidot_H", "rad/s", &PilotInput::phidot_H),
      scalar("M_zH", "N*m", &PilotInput::M_zH),
      joint("qH_l0", 0, 0), joint("qH_l1", 0, 1), joint("qH_l2", 0, 2), joint("qH_l3", 0, 3),
      joint("qH_r0", 1, 0), joint("qH_r1", 1, 1), joint("qH_r2", 1, 2), joint("qH_r3", 1, 3),
      mode("u_s", &PilotInput::u_s),
      mode("u_y", &PilotInput::u_y),
      mode("u_A", &PilotInput::u_A),
      scalar("pilot_time", "s", &PilotInput::timestamp),
  };
  return fields;
}

Mode mode_from_value(double v, const std::string& what) {
  if (v == 0.0) return Mode::P;
  if (v == 1.0) return Mode::D;
  throw std::invalid_argument(what + ": mode must be 0 or 1");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_trace(const PilotTrace& trace) {
  const auto& fields = pilot_fields();
  std::string out = kHeader + std::to_string(kTraceVersion) + "\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += fields[i].name;
  }
  out += "\n";
  for (const PilotInput& in : trace.rows) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ",";
      out += format_double(fields[i].get(in));
    }
    out += "\n";
  }
  return out;
}

PilotTrace parse_trace(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0) {
    throw std::invalid_argument(origin + ": not a pilot trace");
  }
  if (line.substr(std::string(kHeader).size()) != std::to_string(kTraceVersion)) {
    throw std::invalid_argument(origin + ": unsupported trace version");
  }
  const auto& fields = pilot_fields();
  if (!std::getline(in, line)) throw std::invalid_argument(origin + ": missing column header");
  const std::vector<std::string> names = split_csv(line);
  if (names.size() != fields.size()) throw std::invalid_argument(origin + ": wrong column count");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] != fields[i].name) {
      throw std::invalid_argument(origin + ": unexpected column " + names[i]);
    }
  }
  PilotTrace trace;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split_csv(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (cells.size() != fields.size()) throw std::invalid_argument(where + ": wrong cell count");
    PilotInput p;
    for (std::size_t i = 0; i < cells.size(); ++i) fields[i].set(p, parse_double(cells[i], where));
    trace.rows.push_back(p);
  }
  if (trace.rows.empty()) throw std::invalid_argument(origin + ": empty trace");
  return trace;
}

PilotTrace read_trace(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open trace: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_trace(ss.str(), path);
}

void write_trace(const PilotTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write trace: " + path);
  f << format_trace(trace);
  if (!f) throw std::runtime_error("write failed: " + path);
}

const PilotInput& trace_input(const PilotTrace& trace, int tick) {
  if (trace.rows.empty()) throw std::invalid_argument("empty trace");
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(tick), trace.rows.size() - 1);
  return trace.rows[k];
}

}  // namespace teleop
