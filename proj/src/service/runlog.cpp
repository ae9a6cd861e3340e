#include "teleop/service/runlog.hpp"

#include "teleop/service/trace.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace teleop {

namespace {

using Get = std::function<double(const TickRecord&)>;

double flag(bool b) { return b ? 1.0 : 0.0; }
double mode(Mode m) { return static_cast<double>(m); }

const VelocitySetpoint* velocity_sp(const TickRecord& r) {
  return std::get_if<VelocitySetpoint>(&r.setpoints.sagittal);
}
const DcmSetpoint* dcm_sp(const TickRecord& r) { return std::get_if<DcmSetpoint>(&r.setpoints.sagittal); }
const YawPositionSetpoint* yaw_pos_sp(const TickRecord& r) {
  return std::get_if<YawPositionSetpoint>(&r.setpoints.yaw);
}
const YawAccelerationSetpoint* yaw_acc_sp(const TickRecord& r) {
  return std::get_if<YawAccelerationSetpoint>(&r.setpoints.yaw);
}

std::vector<LogColumn> build_columns() {
  std::vector<LogColumn> c;
  auto add = [&c](std::string name, std::string unit, std::string desc, ColumnGroup g, Get get) {
    c.push_back(LogColumn{std::move(name), std::move(unit), std::move(desc), g, std::move(get)});
  };
  auto state = [&add](std::string name, std::string unit, std::string desc, Get get) {
    add(std::move(name), std::move(unit), std::move(desc), ColumnGroup::State, std::move(get));
  };
  const char* side[2] = {"l", "r"};
  const char* axis[3] = {"x", "y", "z"};

  add("tick", "-", "control tick index, consecutive from 0", ColumnGroup::Tick,
      [](const TickRecord& r) { return static_cast<double>(r.tick); });
  add("t", "s", "time at the start of the tick", ColumnGroup::Tick,
      [](const TickRecord& r) { return r.t; });
  for (const PilotField& f : pilot_fields()) {
    auto get = f.get;
    add(f.name, f.unit, "pilot input after ingestion", ColumnGroup::Pilot,
        [get](const TickRecord& r) { return get(r.input); });
  }

  state("x", "m", "wheel axle position along the heading", [](const TickRecord& r) { return r.robot.x; });
  state("xdot", "m/s", "axle velocity", [](const TickRecord& r) { return r.robot.xdot; });
  state("theta", "rad", "body pitch, positive leaning forward", [](const TickRecord& r) { return r.robot.theta; });
  state("thetadot", "rad/s", "pitch rate", [](const TickRecord& r) { return r.robot.thetadot; });
  state("phi", "rad", "heading", [](const TickRecord& r) { return r.robot.phi; });
  state("phidot", "rad/s", "yaw rate", [](const TickRecord& r) { return r.robot.phidot; });
  for (std::size_t a = 0; a < 2; ++a) {
    for (int j = 0; j < 4; ++j) {
      state(std::string("q_") + side[a] + std::to_string(j), "rad", "arm joint angle",
            [a, j](const TickRecord& r) { return r.robot.q[a][j]; });
    }
  }
  for (std::size_t a = 0; a < 2; ++a) {
    for (int j = 0; j < 4; ++j) {
      state(std::string("qdot_") + side[a] + std::to_string(j), "rad/s", "arm joint rate",
            [a, j](const TickRecord& r) { return r.robot.qdot[a][j]; });
    }
  }
  state("base_x", "m", "world x of the axle midpoint", [](const TickRecord& r) { return r.base_x; });
  state("base_y", "m", "world y of the axle midpoint", [](const TickRecord& r) { return r.base_y; });

  state("mode_s", "0=P 1=D", "active sagittal mode", [](const TickRecord& r) { return mode(r.modes.mode_s); });
  state("mode_y", "0=P 1=D", "active yaw mode", [](const TickRecord& r) { return mode(r.modes.mode_y); });
  state("mode_A", "0=P 1=D", "active manipulation mode", [](const TickRecord& r) { return mode(r.modes.mode_A); });
  state("x_R_des", "m", "integrated base position target", [](const TickRecord& r) { return r.modes.x_R_des; });
  state("phi_offset", "rad", "yaw offset", [](const TickRecord& r) { return r.modes.phi_offset; });
  state("alpha", "-", "manipulation blend, 0 joint PD, 1 impedance", [](const TickRecord& r) { return r.modes.alpha; });

  state("sp_x_des", "m", "sagittal P position target (0 in D)",
        [](const TickRecord& r) { return velocity_sp(r) ? velocity_sp(r)->x_des : 0.0; });
  state("sp_xdot_des", "m/s", "sagittal P velocity target (0 in D)",
        [](const TickRecord& r) { return velocity_sp(r) ? velocity_sp(r)->xdot_des : 0.0; });
  state("sp_xi_des", "rad", "sagittal D DCM target (0 in P)",
        [](const TickRecord& r) { return dcm_sp(r) ? dcm_sp(r)->xi_des : 0.0; });
  state("sp_phi_des", "rad", "yaw P heading target (0 in D)",
        [](const TickRecord& r) { return yaw_pos_sp(r) ? yaw_pos_sp(r)->phi_des : 0.0; });
  state("sp_phidot_des", "rad/s", "yaw P rate target (0 in D)",
        [](const TickRecord& r) { return yaw_pos_sp(r) ? yaw_pos_sp(r)->phidot_des : 0.0; });
  state("sp_phiddot_des", "rad/s^2", "yaw D acceleration target (0 in P)",
        [](const TickRecord& r) { return yaw_acc_sp(r) ? yaw_acc_sp(r)->phiddot_des : 0.0; });
  for (std::size_t a = 0; a < 2; ++a) {
    for (int j = 0; j < 4; ++j) {
      state(std::string("sp_q_") + side[a] + std::to_string(j), "rad", "arm joint target",
            [a, j](const TickRecord& r) { return r.setpoints.arm.q_des[a][j]; });
    }
  }
  for (std::size_t a = 0; a < 2; ++a) {
    for (int k = 0; k < 3; ++k) {
      state(std::string("sp_hand_") + side[a] + axis[k], "m", "hand target, torso frame",
            [a, k](const TickRecord& r) { return r.setpoints.arm.x_des[a][k]; });
    }
  }

  state("wheel_force", "N", "sagittal wheel force command", [](const TickRecord& r) { return r.command.wheel_force; });
  state("tau_y", "N*m", "differential wheel torque command", [](const TickRecord& r) { return r.command.tau_y; });
  for (std::size_t a = 0; a < 2; ++a) {
    for (int j = 0; j < 4; ++j) {
      state(std::string("tau_") + side[a] + std::to_string(j), "N*m", "arm joint torque command",
            [a, j](const TickRecord& r) { return r.command.tau_arm[a][j]; });
    }
  }
  state("sat_wheel", "0/1", "wheel force clipped", [](const TickRecord& r) { return flag(r.command.saturated.wheel); });
  state("sat_yaw", "0/1", "yaw torque clipped", [](const TickRecord& r) { return flag(r.command.saturated.yaw); });
  state("sat_arm_l", "0/1", "left arm torque clipped", [](const TickRecord& r) { return flag(r.command.saturated.arm[0]); });
  state("sat_arm_r", "0/1", "right arm torque clipped", [](const TickRecord& r) { return flag(r.command.saturated.arm[1]); });

  state("contact", "0-3", "committed contact (0 none, 1 left, 2 right, 3 both)",
        [](const TickRecord& r) { return static_cast<double>(r.contact.committed); });
  state("contact_raw", "0-3", "raw contact sample", [](const TickRecord& r) { return static_cast<double>(r.contact.raw); });

  for (std::size_t a = 0; a < 2; ++a) {
    for (int k = 0; k < 3; ++k) {
      state(std::string("hand_force_") + side[a] + axis[k], "N", "tick-average force on the hand, world frame",
            [a, k](const TickRecord& r) { return r.hand_force[a][k]; });
    }
  }
  state("F_ext_x", "N", "tick-average external sagittal force on the robot", [](const TickRecord& r) { return r.F_ext_x; });
  state("M_ext_z", "N*m", "tick-average external yaw moment on the robot", [](const TickRecord& r) { return r.M_ext_z; });
  state("M_ext_est", "N*m", "yaw moment estimated from arm torques", [](const TickRecord& r) { return r.M_ext_est; });
  state("xi_R", "rad", "robot DCM", [](const TickRecord& r) { return r.xi_R; });
  state("xi_H", "rad", "pilot DCM", [](const TickRecord& r) { return r.xi_H; });
  state("F_xH", "N", "force feedback to the pilot", [](const TickRecord& r) { return r.haptic.force.F_xH; });
  state("F_xH_sat", "0/1", "force feedback clipped", [](const TickRecord& r) { return flag(r.haptic.force.saturated); });
  state("F_dcm_term", "N", "DCM synchronisation part of F_xH", [](const TickRecord& r) { return r.haptic.force.dcm_sync_term; });
  state("F_contact_term", "N", "contact part of F_xH", [](const TickRecord& r) { return r.haptic.force.contact_force_term; });
  state("M_zH_fb", "N*m", "moment feedback to the pilot", [](const TickRecord& r) { return r.haptic.moment.M_zH_fb; });
  state("M_zH_fb_sat", "0/1", "moment feedback clipped", [](const TickRecord& r) { return flag(r.haptic.moment.saturated); });
  state("M_robot_term", "N*m", "wheel-moment part of M_zH_fb", [](const TickRecord& r) { return r.haptic.moment.robot_moment_term; });
  state("M_contact_term", "N*m", "contact part of M_zH_fb", [](const TickRecord& r) { return r.haptic.moment.contact_moment_term; });
  state("M_ff", "N*m", "feedforward moment from the pilot", [](const TickRecord& r) { return r.M_ff; });

  for (int k = 0; k < 3; ++k) {
    const char* n[3] = {"box_x", "box_y", "box_yaw"};
    const char* u[3] = {"m", "m", "rad"};
    state(n[k], u[k], "box pose", [k](const TickRecord& r) { return r.box_pose[k]; });
  }
  for (int k = 0; k < 3; ++k) {
    const char* n[3] = {"box_vx", "box_vy", "box_wz"};
    const char* u[3] = {"m/s", "m/s", "rad/s"};
    state(n[k], u[k], "box velocity", [k](const TickRecord& r) { return r.box_velocity[k]; });
  }
  state("wall_force", "N", "wall normal force on the box", [](const TickRecord& r) { return r.wall_force; });
  state("box_lift", "N", "upward hand force on the box", [](const TickRecord& r) { return r.box_lift; });
  for (int k = 0; k < 3; ++k) {
    const char* n[3] = {"object_x", "object_y", "object_yaw"};
    const char* u[3] = {"m", "m", "rad"};
    state(n[k], u[k], "shared object pose", [k](const TickRecord& r) { return r.object_pose[k]; });
  }
  for (int k = 0; k < 3; ++k) {
    const char* n[3] = {"agent_fx", "agent_fy", "agent_mz"};
    const char* u[3] = {"N", "N", "N*m"};
    state(n[k], u[k], "external agent wrench on the object", [k](const TickRecord& r) { return r.agent_wrench[k]; });
  }
  state("fault", "0/1", "safe-stop active (torques zero)", [](const TickRecord& r) { return flag(r.fault); });
  return c;
}

const char* const kMagic = "# teleop-log version=";

void parse_header_line(const std::string& body, KeyValues& into, const std::string& where) {
  const auto eq = body.find('=');
  if (eq == std::string::npos) throw std::invalid_argument(where + ": malformed header line");
  const std::string key = body.substr(0, eq);
  if (into.count(key)) throw std::invalid_argument(where + ": duplicate header key " + key);
  into[key] = body.substr(eq + 1);
}

}  // namespace

const std::vector<LogColumn>& log_columns() {
  static const std::vector<LogColumn> columns = build_columns();
  return columns;
}

std::size_t log_column_index(const std::string& name) {
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].name == name) return i;
  }
  throw std::invalid_argument("unknown log column: " + name);
}

std::string log_column_dictionary() {
  std::string out = "| # | column | unit | group | meaning |\n|---|---|---|---|---|\n";
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const char* g = cols[i].group == ColumnGroup::Tick ? "tick"
                    : cols[i].group == ColumnGroup::Pilot ? "pilot" : "state";
    out += "| " + std::to_string(i) + " | `" + cols[i].name + "` | " + cols[i].unit + " | " + g +
           " | " + cols[i].description + " |\n";
  }
  return out;
}

void RunLog::append(const TickRecord& rec) {
  const auto& cols = log_columns();
  std::vector<double> row;
  row.reserve(cols.size());
  for (const LogColumn& c : cols) row.push_back(c.get(rec));
  if (rec.fault && fault_tick < 0) fault_tick = rec.tick;
  rows.push_back(std::move(row));
}

double RunLog::at(std::size_t row, const std::string& column) const {
  return rows.at(row).at(log_column_index(column));
}

PilotInput RunLog::pilot(std::size_t row) const {
  PilotInput p;
  for (const PilotField& f : pilot_fields()) f.set(p, at(row, f.name));
  return p;
}

bool RunLog::fault(std::size_t row) const { return at(row, "fault") != 0.0; }

std::string format_log(const RunLog& log) {
  std::ostringstream out;
  out << kMagic << kLogVersion << "\n";
  for (const auto& [k, v] : log.scenario) out << "# scenario " << k << "=" << v << "\n";
  for (const auto& [k, v] : log.config) out << "# config " << k << "=" << v << "\n";
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
  out << "\n";
  for (std::size_t r = 0; r < log.rows.size(); ++r) {
    if (static_cast<int>(r) == log.fault_tick) out << "# fault tick=" << r << " reason=" << log.fault_reason << "\n";
    const auto& row = log.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  out << "# end ticks=" << log.rows.size() << "\n";
  return out.str();
}

RunLog parse_log(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0) {
    throw std::invalid_argument(origin + ": not a run log");
  }
  const std::string version = line.substr(std::strlen(kMagic));
  if (version != std::to_string(kLogVersion)) {
    throw std::invalid_argument(origin + ": log version " + version + ", expected " +
                                std::to_string(kLogVersion));
  }
  RunLog log;
  const auto& cols = log_columns();
  bool have_columns = false;
  bool ended = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (ended) {
      if (!line.empty()) throw std::invalid_argument(where + ": data after end marker");
      continue;
    }
    if (line.rfind("# scenario ", 0) == 0) {
      parse_header_line(line.substr(11), log.scenario, where);
    } else if (line.rfind("# config ", 0) == 0) {
      parse_header_line(line.substr(9), log.config, where);
    } else if (line.rfind("# fault ", 0) == 0) {
      const auto pos = line.find(" reason=");
      log.fault_reason = pos == std::string::npos ? "" : line.substr(pos + 8);
    } else if (line.rfind("# end ticks=", 0) == 0) {
      const double n = parse_double(line.substr(12), where);
      if (n != static_cast<double>(log.rows.size())) {
        throw std::invalid_argument(where + ": end marker says " + line.substr(12) + " ticks, found " +
                                    std::to_string(log.rows.size()));
      }
      ended = true;
    } else if (line.empty() || line[0] == '#') {
      continue;
    } else if (!have_columns) {
      const auto names = split_csv(line);
      if (names.size() != cols.size()) throw std::invalid_argument(where + ": wrong column count");
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] != cols[i].name) throw std::invalid_argument(where + ": unexpected column " + names[i]);
      }
      have_columns = true;
    } else {
      const auto cells = split_csv(line);
      if (cells.size() != cols.size()) throw std::invalid_argument(where + ": truncated row");
      std::vector<double> row;
      row.reserve(cells.size());
      for (const std::string& s : cells) row.push_back(parse_double(s, where));
      if (row[0] != static_cast<double>(log.rows.size())) {
        throw std::invalid_argument(where + ": ticks not consecutive");
      }
      if (row[log_column_index("fault")] != 0.0 && log.fault_tick < 0) {
        log.fault_tick = static_cast<int>(log.rows.size());
      }
      log.rows.push_back(std::move(row));
    }
  }
  if (!have_columns) throw std::invalid_argument(origin + ": missing column header");
  if (!ended) throw std::invalid_argument(origin + ": truncated log (no end marker)");
  return log;
}

RunLog read_log(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open log: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_log(ss.str(), path);
}

void write_log(const RunLog& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write log: " + path);
  f << format_log(log);
  if (!f) throw std::runtime_error("write failed: " + path);
}

Scenario log_scenario(const RunLog& log) { return parse_scenario(log.scenario, ""); }

TeleopConfig log_config(const RunLog& log) {
  TeleopConfig cfg;
  cfg.apply(log.config);
  return cfg;
}

}  // namespace teleop
