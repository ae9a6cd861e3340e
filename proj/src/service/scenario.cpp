#include "teleop/service/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace teleop {

namespace fs = std::filesystem;

namespace {

struct Field {
  std::string key;
  double* scalar = nullptr;
  double* vec = nullptr;
  int n = 0;
  bool* flag = nullptr;
};

std::vector<Field> fields(Scenario& s) {
  auto num = [](std::string k, double& v) { return Field{std::move(k), &v}; };
  auto vec = [](std::string k, double* v, int n) { return Field{std::move(k), nullptr, v, n}; };
  auto flag = [](std::string k, bool& b) {
    Field f{std::move(k)};
    f.flag = &b;
    return f;
  };
  return {
      num("duration", s.duration),
      num("robot.base_x", s.base_x),
      num("robot.base_y", s.base_y),
      num("robot.phi", s.phi),
      num("robot.theta", s.theta),
      vec("robot.arm_left", s.arm_q[0].data(), 4),
      vec("robot.arm_right", s.arm_q[1].data(), 4),
      flag("box.enabled", s.box.enabled),
      num("box.mass", s.box.mass),
      num("box.half_x", s.box.half_x),
      num("box.half_y", s.box.half_y),
      vec("box.pose", s.box.pose.data(), 3),
      num("box.mu_s", s.box.mu_s),
      num("box.mu_k", s.box.mu_k),
      flag("wall.enabled", s.wall.enabled),
      num("wall.x", s.wall.x),
      num("wall.k", s.wall.k),
      num("wall.b", s.wall.b),
      num("slot.x_min", s.slot.x_min),
      num("slot.x_max", s.slot.x_max),
      num("slot.y_min", s.slot.y_min),
      num("slot.y_max", s.slot.y_max),
      num("slot.yaw_tolerance", s.slot.yaw_tolerance),
      num("success.wall_force", s.success_wall_force),
      flag("object.enabled", s.object.enabled),
      num("object.mass", s.object.mass),
      num("object.inertia", s.object.inertia),
      vec("object.agent_grip_left", s.object.agent_grip[0].data(), 3),
      vec("object.agent_grip_right", s.object.agent_grip[1].data(), 3),
      num("object.latch_k", s.object.latch_k),
      num("object.latch_b", s.object.latch_b),
      num("agent.k", s.agent.k),
      num("agent.b", s.agent.b),
      num("agent.max_force", s.agent.max_force),
      num("inject.drift_time", s.drift_time),
      num("inject.drift_amount", s.drift_amount),
  };
}

std::string join(const double* v, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

int Scenario::ticks(double control_dt) const {
  return static_cast<int>(std::llround(duration / control_dt));
}

void Scenario::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("scenario duration must be positive");
  if (box.enabled) box.validate();
  agent.validate();
  if (agent.mode != AgentMode::None && !object.enabled) {
    throw std::invalid_argument("an external agent needs the shared object");
  }
  if (!(object.mass > 0.0 && object.inertia > 0.0)) throw std::invalid_argument("object inertia");
}

std::string format_keyframes(const std::vector<Keyframe>& frames) {
  std::string out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i) out += ";";
    out += format_double(frames[i].t) + ":" + format_double(frames[i].v.x()) + ":" +
           format_double(frames[i].v.y()) + ":" + format_double(frames[i].v.z());
  }
  return out;
}

std::vector<Keyframe> parse_keyframes(const std::string& s, const std::string& key) {
  std::vector<Keyframe> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream is(item);
    std::string part;
    std::vector<double> v;
    while (std::getline(is, part, ':')) {
      const auto b = part.find_first_not_of(" \t");
      const auto e = part.find_last_not_of(" \t");
      v.push_back(parse_double(b == std::string::npos ? "" : part.substr(b, e - b + 1), key));
    }
    if (v.size() != 4) throw std::invalid_argument(key + ": keyframes are t:a:b:c");
    out.push_back(Keyframe{v[0], Vec3(v[1], v[2], v[3])});
  }
  return out;
}

Scenario parse_scenario(const KeyValues& kv, const std::string& base_dir) {
  Scenario s;
  std::vector<Field> table = fields(s);
  for (const auto& [key, value] : kv) {
    if (key == "name") {
      s.name = value;
      continue;
    }
    if (key == "pilot.trace") {
      s.trace = value.empty() ? value : (fs::path(base_dir) / value).lexically_normal().string();
      continue;
    }
    if (key == "agent.mode") {
      s.agent.mode = agent_mode_from(value);
      continue;
    }
    if (key == "agent.trajectory") {
      s.agent.trajectory = parse_keyframes(value, key);
      continue;
    }
    if (key == "agent.wrench") {
      s.agent.wrench = parse_keyframes(value, key);
      continue;
    }
    const Field* f = nullptr;
    for (const Field& x : table) {
      if (x.key == key) f = &x;
    }
    if (!f) throw std::invalid_argument("unknown scenario key: " + key);
    if (f->scalar) {
      *f->scalar = parse_double(value, key);
    } else if (f->vec) {
      const std::vector<double> v = parse_list(value, key);
      if (static_cast<int>(v.size()) != f->n) {
        throw std::invalid_argument(key + ": expected " + std::to_string(f->n) + " values");
      }
      for (int i = 0; i < f->n; ++i) f->vec[i] = v[i];
    } else {
      *f->flag = parse_bool(value, key);
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(read_key_values(path), fs::path(path).parent_path().string());
}

KeyValues scenario_to_key_values(const Scenario& sc) {
  Scenario s = sc;
  KeyValues kv;
  kv["name"] = s.name;
  kv["pilot.trace"] = s.trace;
  kv["agent.mode"] = to_string(s.agent.mode);
  kv["agent.trajectory"] = format_keyframes(s.agent.trajectory);
  kv["agent.wrench"] = format_keyframes(s.agent.wrench);
  for (const Field& f : fields(s)) {
    if (f.scalar) kv[f.key] = format_double(*f.scalar);
    else if (f.vec) kv[f.key] = join(f.vec, f.n);
    else kv[f.key] = *f.flag ? "true" : "false";
  }
  return kv;
}

std::string find_scenario(const std::string& name_or_path, const std::string& fixture_dir) {
  if (fs::is_regular_file(name_or_path)) return name_or_path;
  const fs::path candidate = fs::path(fixture_dir) / "scenarios" / (name_or_path + ".scenario");
  if (fs::is_regular_file(candidate)) return candidate.string();
  throw std::invalid_argument("unknown scenario: " + name_or_path);
}

World make_world(const Scenario& s, const TeleopConfig& cfg) {
  World w;
  w.params = cfg.physical;
  w.contact = cfg.contact;
  w.robot.theta = s.theta;
  w.robot.phi = s.phi;
  w.robot.q = s.arm_q;
  w.base_x = s.base_x;
  w.base_y = s.base_y;
  w.box = s.box;
  w.wall = s.wall;
  w.object = s.object;
  w.agent = s.agent;
  if (w.object.enabled) attach_object(w);
  w.hand_position = hand_positions(w);
  return w;
}

}  // namespace teleop
