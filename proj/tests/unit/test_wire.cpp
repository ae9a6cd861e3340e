#include "teleop/service/schema.hpp"
#include "teleop/service/trace.hpp"
#include "teleop/service/wire.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <limits>

using namespace teleop;
using teleop::testing::rng;

namespace {

double any_double() {
  switch (rng()() % 8) {
    case 0: return std::numeric_limits<double>::quiet_NaN();
    case 1: return -std::numeric_limits<double>::infinity();
    case 2: return -0.0;
    case 3: return std::numeric_limits<double>::denorm_min();
    case 4: {
      const std::uint64_t bits = rng()();
      double v;
      std::memcpy(&v, &bits, 8);
      return v;
    }
    default: return teleop::testing::uniform(-10.0, 10.0);
  }
}

Mode any_mode() { return rng()() % 2 ? Mode::D : Mode::P; }
bool any_bool() { return rng()() % 2 == 1; }

WireHeader any_header() {
  WireHeader h;
  h.session = static_cast<std::uint32_t>(rng()());
  h.tick = rng()();
  return h;
}

PilotInputMsg any_pilot() {
  PilotInputMsg m;
  m.header = any_header();
  for (const PilotField& f : pilot_fields()) {
    const std::string n = f.name;
    if (n == "u_s" || n == "u_y" || n == "u_A") f.set(m.input, static_cast<double>(any_mode()));
    else f.set(m.input, any_double());
  }
  return m;
}

TelemetryMsg any_telemetry() {
  TelemetryMsg m;
  m.header = any_header();
  for (double* v : {&m.x, &m.xdot, &m.theta, &m.thetadot, &m.phi, &m.phidot, &m.base_x, &m.base_y,
                    &m.x_R_des, &m.phi_offset, &m.alpha}) {
    *v = any_double();
  }
  for (Vec4& q : m.q) {
    for (int j = 0; j < 4; ++j) q[j] = any_double();
  }
  m.mode_s = any_mode();
  m.mode_y = any_mode();
  m.mode_A = any_mode();
  for (int k = 0; k < 3; ++k) {
    m.box_pose[k] = any_double();
    m.object_pose[k] = any_double();
  }
  m.contact = static_cast<Contact>(rng()() % 4);
  m.fault = any_bool();
  return m;
}

HapticMsg any_haptic() {
  HapticMsg m;
  m.header = any_header();
  auto& f = m.feedback.force;
  auto& mo = m.feedback.moment;
  for (double* v : {&f.F_xH, &f.dcm_sync_term, &f.contact_force_term, &mo.M_zH_fb,
                    &mo.robot_moment_term, &mo.contact_moment_term}) {
    *v = any_double();
  }
  f.saturated = any_bool();
  mo.saturated = any_bool();
  return m;
}

ControlMsg any_control() {
  ControlMsg m;
  m.header = any_header();
  m.command = static_cast<ControlCommand>(1 + rng()() % 4);
  const std::size_t n = rng()() % 256;
  for (std::size_t i = 0; i < n; ++i) m.scenario.push_back(static_cast<char>(rng()() % 256));
  m.toggles = FeedbackToggles{any_bool(), any_bool(), any_bool(), any_bool()};
  return m;
}

WireMessage any_message(MessageKind k) {
  switch (k) {
    case MessageKind::PilotInput: return any_pilot();
    case MessageKind::Telemetry: return any_telemetry();
    case MessageKind::Haptic: return any_haptic();
    case MessageKind::Control: return any_control();
  }
  return any_pilot();
}

constexpr MessageKind kKinds[] = {MessageKind::PilotInput, MessageKind::Telemetry, MessageKind::Haptic,
                                  MessageKind::Control};

double f64_at(const std::vector<std::uint8_t>& frame, std::size_t payload_offset) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | frame[4 + payload_offset + i];
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

TEST_CASE("serialize then deserialize is the identity for every kind") {
  for (MessageKind k : kKinds) {
    for (int i = 0; i < 10'000; ++i) {
      const WireMessage m = any_message(k);
      const WireMessage back = decode(encode(m));
      REQUIRE(kind_of(back) == k);
      REQUIRE(wire_equal(back, m));
    }
  }
}

TEST_CASE("every message carries version, session and tick") {
  const WireMessage m = any_haptic();
  const auto frame = encode(m);
  CHECK(frame[4] == kWireVersion);
  CHECK(frame[5] == static_cast<std::uint8_t>(MessageKind::Haptic));
  std::uint32_t session = 0;
  for (int i = 3; i >= 0; --i) session = (session << 8) | frame[6 + i];
  std::uint64_t tick = 0;
  for (int i = 7; i >= 0; --i) tick = (tick << 8) | frame[10 + i];
  CHECK(session == header_of(m).session);
  CHECK(tick == header_of(m).tick);
}

TEST_CASE("schema offsets and sizes agree with the encoder") {
  for (MessageKind k : {MessageKind::PilotInput, MessageKind::Telemetry, MessageKind::Haptic}) {
    for (int i = 0; i < 200; ++i) {
      const WireMessage m = any_message(k);
      const auto frame = encode(m);
      CHECK(frame.size() == 4 + min_payload_size(k));
      // decoding each f64 at its documented offset gives back the message field
      WireMessage rebuilt = m;
      if (auto* p = std::get_if<PilotInputMsg>(&rebuilt)) {
        for (const PilotField& f : pilot_fields()) {
          const auto& sf = body_fields(k);
          for (const SchemaField& s : sf) {
            if (s.name != f.name) continue;
            const std::size_t off = *body_offset(k, s.name);
            if (s.type == FieldType::F64) f.set(p->input, f64_at(frame, off));
            else f.set(p->input, frame[4 + off]);
          }
        }
        CHECK(wire_equal(rebuilt, m));
      }
    }
  }
  const auto t = encode(any_telemetry());
  CHECK(t[4 + *body_offset(MessageKind::Telemetry, "fault")] <= 1);
  const TelemetryMsg tm = any_telemetry();
  const auto tf = encode(tm);
  CHECK(std::memcmp(&tm.alpha, &tf[4 + *body_offset(MessageKind::Telemetry, "alpha")], 8) == 0);
  CHECK(std::memcmp(&tm.box_pose[2], &tf[4 + *body_offset(MessageKind::Telemetry, "box_yaw")], 8) == 0);
  const HapticMsg hm = any_haptic();
  const auto hf = encode(hm);
  CHECK(std::memcmp(&hm.feedback.moment.M_zH_fb, &hf[4 + *body_offset(MessageKind::Haptic, "M_zH_fb")], 8) == 0);
  CHECK_FALSE(body_offset(MessageKind::Control, "feedback").has_value());
  ControlMsg c;
  c.scenario = "abc";
  CHECK(encode(c).size() == 4 + min_payload_size(MessageKind::Control) + 3);
}

TEST_CASE("the JSON schema document lists the wire fields") {
  const auto doc = nlohmann::json::parse(wire_schema_json());
  CHECK(doc["version"] == kWireVersion);
  CHECK(doc["endianness"] == "little");
  for (MessageKind k : kKinds) {
    const auto& m = doc["messages"][to_string(k)];
    CHECK(m["kind"] == static_cast<int>(k));
    CHECK(m["min_payload"] == min_payload_size(k));
    const auto& fields = body_fields(k);
    REQUIRE(m["fields"].size() == fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      CHECK(m["fields"][i]["name"] == fields[i].name);
      CHECK(m["fields"][i]["type"] == to_string(fields[i].type));
    }
  }
  // pilot field names are the trace and log column names
  const auto& pf = doc["messages"]["pilot_input"]["fields"];
  for (std::size_t i = 0; i < pilot_fields().size(); ++i) CHECK(pf[i]["name"] == pilot_fields()[i].name);
}

TEST_CASE("malformed payloads are rejected") {
  const auto good = encode(any_pilot());
  auto payload = [](std::vector<std::uint8_t> f) { return std::vector<std::uint8_t>(f.begin() + 4, f.end()); };
  auto reject = [](const std::vector<std::uint8_t>& p) {
    CHECK_THROWS_AS(decode_payload(p.data(), p.size()), WireError);
  };
  auto p = payload(good);
  auto v = p;
  v[0] = 9;
  reject(v);  // version
  v = p;
  v[1] = 7;
  reject(v);  // kind
  v = p;
  v.pop_back();
  reject(v);  // short
  v = p;
  v.push_back(0);
  reject(v);  // trailing
  v = p;
  v[*body_offset(MessageKind::PilotInput, "u_s")] = 2;
  reject(v);  // mode byte
  ControlMsg c;
  auto cf = payload(encode(c));
  cf.back() = 0x10;
  reject(cf);  // toggle bits
  c.scenario.assign(256, 'x');
  CHECK_THROWS_AS(encode(c), WireError);
  std::vector<std::uint8_t> frame = good;
  frame[0] ^= 1;
  CHECK_THROWS_AS(decode(frame), WireError);
}

TEST_CASE("frame reader: fragmentation, rejection counting, resync") {
  std::vector<WireMessage> sent;
  std::vector<std::uint8_t> stream;
  for (int i = 0; i < 50; ++i) {
    sent.push_back(any_message(kKinds[i % 4]));
    const auto f = encode(sent.back());
    stream.insert(stream.end(), f.begin(), f.end());
    if (i % 10 == 3) {
      // a well-framed payload with a bad version byte
      auto bad = encode(any_haptic());
      bad[4] = 0;
      stream.insert(stream.end(), bad.begin(), bad.end());
    }
  }
  FrameReader reader;
  std::vector<WireMessage> got;
  for (std::uint8_t b : stream) {
    reader.feed(&b, 1);
    while (auto m = reader.next()) got.push_back(*m);
  }
  REQUIRE(got.size() == sent.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(wire_equal(got[i], sent[i]));
  CHECK(reader.rejected() == 5);

  FrameReader big;
  const std::uint8_t huge[4] = {0xff, 0xff, 0xff, 0x7f};
  big.feed(huge, 4);
  CHECK_FALSE(big.next());
  CHECK(big.rejected() == 1);
  const auto f = encode(sent[0]);
  big.feed(f.data(), f.size());
  CHECK(big.next().has_value());
}
