#include "teleop/service/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace teleop {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_list(const double* v, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

// One table for both directions so every default lives in its struct.
struct Binding {
  std::string key;
  double* scalar = nullptr;
  double* vec = nullptr;
  int n = 0;
  bool* flag = nullptr;
  int* integer = nullptr;
};

std::vector<Binding> bindings(TeleopConfig& c) {
  PhysicalParams& p = c.physical;
  ControllerGains& g = c.control;
  FeedbackConfig& h = c.haptics;
  auto num = [](std::string k, double& v) { return Binding{std::move(k), &v}; };
  auto vec = [](std::string k, double* v, int n) { return Binding{std::move(k), nullptr, v, n}; };
  auto flag = [](std::string k, bool& b) {
    Binding x{std::move(k)};
    x.flag = &b;
    return x;
  };
  auto integer = [](std::string k, int& i) {
    Binding x{std::move(k)};
    x.integer = &i;
    return x;
  };
  return {
      num("physical.g", p.g),
      num("physical.h_H", p.h_H),
      num("physical.h_R", p.h_R),
      num("physical.m_H", p.m_H),
      num("physical.m_R", p.m_R),
      num("physical.pole_mass_fraction", p.pole_mass_fraction),
      num("physical.I_zH", p.I_zH),
      num("physical.I_zR", p.I_zR),
      num("physical.r_w", p.r_w),
      num("physical.d", p.d),
      num("physical.gamma_H", p.gamma_H),
      num("physical.gamma_R", p.gamma_R),
      vec("physical.shoulder_mount", p.shoulder_mount.data(), 3),
      num("physical.robot_arm.upper_length", p.robot_arm.upper_length),
      num("physical.robot_arm.fore_length", p.robot_arm.fore_length),
      num("physical.human_arm.upper_length", p.human_arm.upper_length),
      num("physical.human_arm.fore_length", p.human_arm.fore_length),
      num("mapping.k_v", c.retarget.gains.k_v),
      num("mapping.k_y", c.retarget.gains.k_y),
      num("mapping.k_m", c.retarget.gains.k_m),
      num("retarget.yaw_limit", c.retarget.limits.yaw_limit),
      num("retarget.pitch_limit", c.retarget.limits.pitch_limit),
      num("retarget.blend_span", c.retarget.blend_span),
      num("retarget.position_error_limit", c.retarget.position_error_limit),
      vec("control.lqr_q", g.lqr_Q_diag.data(), 4),
      num("control.lqr_r", g.lqr_R),
      num("control.dcm_pole", g.dcm_pole),
      num("control.kp_yaw", g.kp_yaw),
      num("control.kd_yaw", g.kd_yaw),
      vec("control.joint_kp", g.K_p.data(), 4),
      vec("control.joint_kd", g.K_d.data(), 4),
      vec("control.cartesian_k", g.K_x.data(), 3),
      vec("control.cartesian_d", g.K_dx.data(), 3),
      num("control.null_space_scale", g.epsilon),
      flag("control.gravity_compensation", g.gravity_compensation),
      flag("control.null_space_task", g.null_space_task),
      num("limits.wheel_force", c.limits.wheel_force),
      num("limits.yaw_torque", c.limits.yaw_torque),
      num("limits.joint_torque", c.limits.joint_torque),
      num("haptics.K_fb", h.K_fb),
      flag("haptics.contact_force", h.enable_contact_force),
      flag("haptics.moment_feedback", h.enable_moment_fb),
      flag("haptics.ff_moment", h.enable_ff_moment),
      flag("haptics.include_robot_moment", h.include_robot_moment),
      num("haptics.force_limit", h.force_limit),
      num("haptics.moment_limit", h.moment_limit),
      num("haptics.contact_threshold", h.contact_threshold),
      num("haptics.contact_dwell", h.contact_dwell),
      num("contact.k_n", c.contact.k_n),
      num("contact.b_n", c.contact.b_n),
      num("contact.k_t", c.contact.k_t),
      num("contact.b_t", c.contact.b_t),
      num("contact.mu_hand", c.contact.mu_hand),
      integer("contact.substeps", c.contact.substeps),
      num("session.control_dt", c.timing.control_dt),
      integer("session.physics_substeps", c.timing.physics_substeps),
      integer("session.live_gap_ticks", c.timing.live_gap_ticks),
      num("session.rate_cutoff_hz", c.timing.rate_cutoff_hz),
      integer("session.telemetry_decimation", c.timing.telemetry_decimation),
  };
}

}  // namespace

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_key_values(ss.str(), path);
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not a number: '" + s + "'");
  }
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw std::invalid_argument(key + ": not a boolean: '" + s + "'");
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), key));
  return out;
}

void SessionTiming::validate() const {
  if (!(control_dt > 0.0) || physics_substeps < 1) throw std::invalid_argument("session timing");
  if (std::abs(physics_dt() - kPhysicsDt) > 1e-12) {
    throw std::invalid_argument("session timing: control_dt / physics_substeps must be 1 ms");
  }
  if (live_gap_ticks < 1 || telemetry_decimation < 1 || !(rate_cutoff_hz > 0.0)) {
    throw std::invalid_argument("session timing");
  }
}

void TeleopConfig::apply(const KeyValues& kv) {
  std::vector<Binding> table = bindings(*this);
  for (const auto& [key, value] : kv) {
    const Binding* b = nullptr;
    for (const Binding& x : table) {
      if (x.key == key) b = &x;
    }
    if (!b) throw std::invalid_argument("unknown config key: " + key);
    if (b->scalar) {
      *b->scalar = parse_double(value, key);
    } else if (b->vec) {
      const std::vector<double> v = parse_list(value, key);
      if (static_cast<int>(v.size()) != b->n) {
        throw std::invalid_argument(key + ": expected " + std::to_string(b->n) + " values");
      }
      for (int i = 0; i < b->n; ++i) b->vec[i] = v[i];
    } else if (b->flag) {
      *b->flag = parse_bool(value, key);
    } else {
      *b->integer = static_cast<int>(parse_double(value, key));
    }
  }
}

KeyValues TeleopConfig::to_key_values() const {
  TeleopConfig copy = *this;
  KeyValues kv;
  for (const Binding& b : bindings(copy)) {
    if (b.scalar) kv[b.key] = format_double(*b.scalar);
    else if (b.vec) kv[b.key] = format_list(b.vec, b.n);
    else if (b.flag) kv[b.key] = *b.flag ? "true" : "false";
    else kv[b.key] = std::to_string(*b.integer);
  }
  return kv;
}

void TeleopConfig::validate() const {
  physical.validate();
  retarget.gains.validate();
  control.validate();
  haptics.validate();
  contact.validate();
  timing.validate();
}

TeleopConfig load_config(const std::string& path) {
  TeleopConfig cfg;
  std::string source = path;
  if (source.empty()) {
    if (const char* env = std::getenv("TELEOP_CONFIG")) source = env;
  }
  if (!source.empty()) cfg.apply(read_key_values(source));
  cfg.validate();
  return cfg;
}

}  // namespace teleop
