#include "teleop/service/schema.hpp"

#include "teleop/service/trace.hpp"

#include <json.hpp>

#include <stdexcept>

namespace teleop {

namespace {

SchemaField f64(std::string name, std::string unit) {
  return SchemaField{std::move(name), FieldType::F64, std::move(unit), "", ""};
}
SchemaField u8(std::string name, std::string enum_name = "") {
  return SchemaField{std::move(name), FieldType::U8, "", std::move(enum_name), ""};
}

std::vector<SchemaField> pilot_body() {
  std::vector<SchemaField> out;
  for (const PilotField& p : pilot_fields()) {
    const std::string name = p.name;
    if (name == "u_s" || name == "u_y" || name == "u_A") out.push_back(u8(name, "mode"));
    else out.push_back(f64(name, p.unit));
  }
  return out;
}

std::vector<SchemaField> telemetry_body() {
  std::vector<SchemaField> out = {
      f64("x", "m"),       f64("xdot", "m/s"),  f64("theta", "rad"), f64("thetadot", "rad/s"),
      f64("phi", "rad"),   f64("phidot", "rad/s"), f64("base_x", "m"), f64("base_y", "m"),
  };
  for (const char* s : {"l", "r"}) {
    for (int j = 0; j < 4; ++j) out.push_back(f64(std::string("q_") + s + std::to_string(j), "rad"));
  }
  for (const char* m : {"mode_s", "mode_y", "mode_A"}) out.push_back(u8(m, "mode"));
  out.push_back(f64("x_R_des", "m"));
  out.push_back(f64("phi_offset", "rad"));
  out.push_back(f64("alpha", "-"));
  for (const char* n : {"box_x", "box_y"}) out.push_back(f64(n, "m"));
  out.push_back(f64("box_yaw", "rad"));
  for (const char* n : {"object_x", "object_y"}) out.push_back(f64(n, "m"));
  out.push_back(f64("object_yaw", "rad"));
  out.push_back(u8("contact", "contact"));
  out.push_back(u8("fault", "bool"));
  return out;
}

std::vector<SchemaField> haptic_body() {
  return {f64("F_xH", "N"),         u8("F_xH_sat", "bool"),   f64("F_dcm_term", "N"),
          f64("F_contact_term", "N"), f64("M_zH_fb", "N*m"),   u8("M_zH_fb_sat", "bool"),
          f64("M_robot_term", "N*m"), f64("M_contact_term", "N*m")};
}

std::vector<SchemaField> control_body() {
  return {u8("command", "control_command"), u8("scenario_length"),
          SchemaField{"scenario", FieldType::Bytes, "utf-8", "", "scenario_length"},
          u8("feedback", "feedback_toggles")};
}

constexpr MessageKind kKinds[] = {MessageKind::PilotInput, MessageKind::Telemetry, MessageKind::Haptic,
                                  MessageKind::Control};

}  // namespace

std::size_t field_size(FieldType t) {
  switch (t) {
    case FieldType::U8: return 1;
    case FieldType::U32: return 4;
    case FieldType::U64: return 8;
    case FieldType::F64: return 8;
    case FieldType::Bytes: return 0;
  }
  return 0;
}

const char* to_string(FieldType t) {
  switch (t) {
    case FieldType::U8: return "u8";
    case FieldType::U32: return "u32";
    case FieldType::U64: return "u64";
    case FieldType::F64: return "f64";
    case FieldType::Bytes: return "bytes";
  }
  return "?";
}

const std::vector<SchemaField>& header_fields() {
  static const std::vector<SchemaField> h = {
      u8("version"), u8("kind", "kind"),
      SchemaField{"session", FieldType::U32, "", "", ""},
      SchemaField{"tick", FieldType::U64, "", "", ""},
  };
  return h;
}

const std::vector<SchemaField>& body_fields(MessageKind kind) {
  static const std::vector<SchemaField> pilot = pilot_body();
  static const std::vector<SchemaField> telemetry = telemetry_body();
  static const std::vector<SchemaField> haptic = haptic_body();
  static const std::vector<SchemaField> control = control_body();
  switch (kind) {
    case MessageKind::PilotInput: return pilot;
    case MessageKind::Telemetry: return telemetry;
    case MessageKind::Haptic: return haptic;
    case MessageKind::Control: return control;
  }
  throw std::invalid_argument("unknown message kind");
}

std::optional<std::size_t> body_offset(MessageKind kind, const std::string& name) {
  std::size_t at = kHeaderSize;
  for (const SchemaField& f : body_fields(kind)) {
    if (f.name == name) return at;
    if (f.type == FieldType::Bytes) return std::nullopt;
    at += field_size(f.type);
  }
  throw std::invalid_argument("no field " + name);
}

std::size_t min_payload_size(MessageKind kind) {
  std::size_t n = kHeaderSize;
  for (const SchemaField& f : body_fields(kind)) n += field_size(f.type);
  return n;
}

std::string wire_schema_json() {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["protocol"] = "teleop-wire";
  doc["version"] = kWireVersion;
  doc["endianness"] = "little";
  doc["float"] = "IEEE 754 binary64";
  doc["frame"] = {{"length_prefix", "u32"},
                  {"length_counts", "payload bytes after the prefix"},
                  {"max_payload", kMaxFrame}};
  auto describe = [](const std::vector<SchemaField>& fields, std::size_t start) {
    ordered_json arr = ordered_json::array();
    std::size_t at = start;
    bool fixed = true;
    for (const SchemaField& f : fields) {
      ordered_json j;
      j["name"] = f.name;
      j["type"] = to_string(f.type);
      if (fixed) j["offset"] = at;
      else j["offset"] = nullptr;
      if (!f.unit.empty()) j["unit"] = f.unit;
      if (!f.enum_name.empty()) j["enum"] = f.enum_name;
      if (!f.length_field.empty()) j["length_field"] = f.length_field;
      arr.push_back(j);
      if (f.type == FieldType::Bytes) fixed = false;
      at += field_size(f.type);
    }
    return arr;
  };
  doc["header"] = describe(header_fields(), 0);
  ordered_json messages;
  for (MessageKind k : kKinds) {
    ordered_json m;
    m["kind"] = static_cast<int>(k);
    m["min_payload"] = min_payload_size(k);
    m["fixed_size"] = k != MessageKind::Control;
    m["fields"] = describe(body_fields(k), kHeaderSize);
    messages[to_string(k)] = m;
  }
  doc["messages"] = messages;
  doc["enums"] = {
      {"kind", {{"pilot_input", 1}, {"telemetry", 2}, {"haptic", 3}, {"control", 4}}},
      {"mode", {{"P", 0}, {"D", 1}}},
      {"bool", {{"false", 0}, {"true", 1}}},
      {"contact", {{"none", 0}, {"left", 1}, {"right", 2}, {"both", 3}}},
      {"control_command", {{"start", 1}, {"stop", 2}, {"select", 3}, {"feedback", 4}}},
  };
  doc["bitmasks"] = {
      {"feedback_toggles",
       {{"contact_force", 1}, {"moment", 2}, {"ff_moment", 4}, {"robot_moment", 8}}},
  };
  return doc.dump(2) + "\n";
}

std::string wire_protocol_markdown() {
  std::string out =
      "All integers and floats are little-endian; floats are IEEE 754 binary64.\n"
      "Each frame is a `u32` payload length followed by the payload. Payloads\n"
      "longer than " + std::to_string(kMaxFrame) + " bytes are rejected.\n\n";
  auto table = [&out](const std::string& title, const std::vector<SchemaField>& fields, std::size_t start) {
    out += "### " + title + "\n\n| offset | field | type | unit / enum |\n|---|---|---|---|\n";
    std::size_t at = start;
    bool fixed = true;
    for (const SchemaField& f : fields) {
      const std::string off = fixed ? std::to_string(at) : "-";
      std::string extra = f.unit;
      if (!f.enum_name.empty()) extra = f.enum_name;
      if (!f.length_field.empty()) extra += ", length in `" + f.length_field + "`";
      out += "| " + off + " | `" + f.name + "` | " + to_string(f.type) + " | " + extra + " |\n";
      if (f.type == FieldType::Bytes) fixed = false;
      at += field_size(f.type);
    }
    out += "\n";
  };
  table("header (every message)", header_fields(), 0);
  for (MessageKind k : kKinds) {
    table(std::string(to_string(k)) + " (kind " + std::to_string(static_cast<int>(k)) + ", " +
              (k == MessageKind::Control ? "at least " : "") + std::to_string(min_payload_size(k)) +
              " payload bytes)",
          body_fields(k), kHeaderSize);
  }
  out +=
      "Enumerations: mode P=0, D=1; contact none=0, left=1, right=2, both=3;\n"
      "control command start=1, stop=2, select=3, feedback=4. Feedback toggle\n"
      "bits: contact_force=1, moment=2, ff_moment=4, robot_moment=8.\n";
  return out;
}

}  // namespace teleop
