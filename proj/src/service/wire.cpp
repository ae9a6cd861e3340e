#include "teleop/service/wire.hpp"

#include <boost/endian/conversion.hpp>

#include <cstring>

namespace teleop {

namespace {

namespace be = boost::endian;

class Writer {
 public:
  void u8(std::uint8_t v) { out.push_back(v); }
  void u32(std::uint32_t v) { put<std::uint32_t, 4>(v); }
  void u64(std::uint64_t v) { put<std::uint64_t, 8>(v); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void flag(bool b) { u8(b ? 1 : 0); }
  void mode(Mode m) { u8(static_cast<std::uint8_t>(m)); }
  std::vector<std::uint8_t> out;

 private:
  template <class T, std::size_t N>
  void put(T v) {
    const std::size_t at = out.size();
    out.resize(at + N);
    be::endian_store<T, N, be::order::little>(out.data() + at, v);
  }
};

class Reader {
 public:
  Reader(const std::uint8_t* d, std::size_t n) : d_(d), n_(n) {}
  std::uint8_t u8() {
    need(1);
    return d_[at_++];
  }
  std::uint32_t u32() { return get<std::uint32_t, 4>(); }
  std::uint64_t u64() { return get<std::uint64_t, 8>(); }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  bool flag() {
    const std::uint8_t v = u8();
    if (v > 1) throw WireError("flag byte out of range");
    return v == 1;
  }
  Mode mode() {
    const std::uint8_t v = u8();
    if (v > 1) throw WireError("mode byte out of range");
    return static_cast<Mode>(v);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(d_ + at_), n);
    at_ += n;
    return s;
  }
  void finish() const {
    if (at_ != n_) throw WireError("trailing bytes in payload");
  }

 private:
  void need(std::size_t k) const {
    if (n_ - at_ < k) throw WireError("payload too short");
  }
  template <class T, std::size_t N>
  T get() {
    need(N);
    const T v = be::endian_load<T, N, be::order::little>(d_ + at_);
    at_ += N;
    return v;
  }
  const std::uint8_t* d_;
  std::size_t n_;
  std::size_t at_ = 0;
};

void write_header(Writer& w, MessageKind kind, const WireHeader& h) {
  w.u8(h.version);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u32(h.session);
  w.u64(h.tick);
}

void write_body(Writer& w, const PilotInputMsg& m) {
  const PilotInput& p = m.input;
  for (double v : {p.theta_H, p.thetadot_H, p.phi_H, p.phidot_H, p.M_zH}) w.f64(v);
  for (const Vec4& q : p.q_aH) {
    for (int j = 0; j < 4; ++j) w.f64(q[j]);
  }
  w.mode(p.u_s);
  w.mode(p.u_y);
  w.mode(p.u_A);
  w.f64(p.timestamp);
}

void write_body(Writer& w, const TelemetryMsg& m) {
  for (double v : {m.x, m.xdot, m.theta, m.thetadot, m.phi, m.phidot, m.base_x, m.base_y}) w.f64(v);
  for (const Vec4& q : m.q) {
    for (int j = 0; j < 4; ++j) w.f64(q[j]);
  }
  w.mode(m.mode_s);
  w.mode(m.mode_y);
  w.mode(m.mode_A);
  w.f64(m.x_R_des);
  w.f64(m.phi_offset);
  w.f64(m.alpha);
  for (int k = 0; k < 3; ++k) w.f64(m.box_pose[k]);
  for (int k = 0; k < 3; ++k) w.f64(m.object_pose[k]);
  w.u8(static_cast<std::uint8_t>(m.contact));
  w.flag(m.fault);
}

void write_body(Writer& w, const HapticMsg& m) {
  const ForceFeedback& f = m.feedback.force;
  const MomentFeedback& mo = m.feedback.moment;
  w.f64(f.F_xH);
  w.flag(f.saturated);
  w.f64(f.dcm_sync_term);
  w.f64(f.contact_force_term);
  w.f64(mo.M_zH_fb);
  w.flag(mo.saturated);
  w.f64(mo.robot_moment_term);
  w.f64(mo.contact_moment_term);
}

void write_body(Writer& w, const ControlMsg& m) {
  if (m.scenario.size() > 255) throw WireError("scenario name longer than 255 bytes");
  w.u8(static_cast<std::uint8_t>(m.command));
  w.u8(static_cast<std::uint8_t>(m.scenario.size()));
  for (char c : m.scenario) w.u8(static_cast<std::uint8_t>(c));
  const FeedbackToggles& t = m.toggles;
  w.u8(static_cast<std::uint8_t>((t.contact_force ? 1 : 0) | (t.moment ? 2 : 0) |
                                 (t.ff_moment ? 4 : 0) | (t.robot_moment ? 8 : 0)));
}

PilotInputMsg read_pilot(Reader& r) {
  PilotInputMsg m;
  PilotInput& p = m.input;
  for (double* v : {&p.theta_H, &p.thetadot_H, &p.phi_H, &p.phidot_H, &p.M_zH}) *v = r.f64();
  for (Vec4& q : p.q_aH) {
    for (int j = 0; j < 4; ++j) q[j] = r.f64();
  }
  p.u_s = r.mode();
  p.u_y = r.mode();
  p.u_A = r.mode();
  p.timestamp = r.f64();
  return m;
}

TelemetryMsg read_telemetry(Reader& r) {
  TelemetryMsg m;
  for (double* v : {&m.x, &m.xdot, &m.theta, &m.thetadot, &m.phi, &m.phidot, &m.base_x, &m.base_y}) {
    *v = r.f64();
  }
  for (Vec4& q : m.q) {
    for (int j = 0; j < 4; ++j) q[j] = r.f64();
  }
  m.mode_s = r.mode();
  m.mode_y = r.mode();
  m.mode_A = r.mode();
  m.x_R_des = r.f64();
  m.phi_offset = r.f64();
  m.alpha = r.f64();
  for (int k = 0; k < 3; ++k) m.box_pose[k] = r.f64();
  for (int k = 0; k < 3; ++k) m.object_pose[k] = r.f64();
  const std::uint8_t c = r.u8();
  if (c > 3) throw WireError("contact byte out of range");
  m.contact = static_cast<Contact>(c);
  m.fault = r.flag();
  return m;
}

HapticMsg read_haptic(Reader& r) {
  HapticMsg m;
  ForceFeedback& f = m.feedback.force;
  MomentFeedback& mo = m.feedback.moment;
  f.F_xH = r.f64();
  f.saturated = r.flag();
  f.dcm_sync_term = r.f64();
  f.contact_force_term = r.f64();
  mo.M_zH_fb = r.f64();
  mo.saturated = r.flag();
  mo.robot_moment_term = r.f64();
  mo.contact_moment_term = r.f64();
  return m;
}

ControlMsg read_control(Reader& r) {
  ControlMsg m;
  const std::uint8_t cmd = r.u8();
  if (cmd < 1 || cmd > 4) throw WireError("unknown control command");
  m.command = static_cast<ControlCommand>(cmd);
  m.scenario = r.bytes(r.u8());
  const std::uint8_t bits = r.u8();
  if (bits & 0xF0) throw WireError("unknown feedback toggle bits");
  m.toggles = FeedbackToggles{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
  return m;
}

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

template <class V>
bool vec_equal(const V& a, const V& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (!bits_equal(a[i], b[i])) return false;
  }
  return true;
}

bool same(const WireHeader& a, const WireHeader& b) {
  return a.version == b.version && a.session == b.session && a.tick == b.tick;
}

bool same(const PilotInputMsg& a, const PilotInputMsg& b) {
  const PilotInput &p = a.input, &q = b.input;
  return same(a.header, b.header) && bits_equal(p.theta_H, q.theta_H) &&
         bits_equal(p.thetadot_H, q.thetadot_H) && bits_equal(p.phi_H, q.phi_H) &&
         bits_equal(p.phidot_H, q.phidot_H) && bits_equal(p.M_zH, q.M_zH) &&
         vec_equal(p.q_aH[0], q.q_aH[0]) && vec_equal(p.q_aH[1], q.q_aH[1]) && p.u_s == q.u_s &&
         p.u_y == q.u_y && p.u_A == q.u_A && bits_equal(p.timestamp, q.timestamp);
}

bool same(const TelemetryMsg& a, const TelemetryMsg& b) {
  return same(a.header, b.header) && bits_equal(a.x, b.x) && bits_equal(a.xdot, b.xdot) &&
         bits_equal(a.theta, b.theta) && bits_equal(a.thetadot, b.thetadot) &&
         bits_equal(a.phi, b.phi) && bits_equal(a.phidot, b.phidot) &&
         bits_equal(a.base_x, b.base_x) && bits_equal(a.base_y, b.base_y) &&
         vec_equal(a.q[0], b.q[0]) && vec_equal(a.q[1], b.q[1]) && a.mode_s == b.mode_s &&
         a.mode_y == b.mode_y && a.mode_A == b.mode_A && bits_equal(a.x_R_des, b.x_R_des) &&
         bits_equal(a.phi_offset, b.phi_offset) && bits_equal(a.alpha, b.alpha) &&
         vec_equal(a.box_pose, b.box_pose) && vec_equal(a.object_pose, b.object_pose) &&
         a.contact == b.contact && a.fault == b.fault;
}

bool same(const HapticMsg& a, const HapticMsg& b) {
  const ForceFeedback &f = a.feedback.force, &g = b.feedback.force;
  const MomentFeedback &m = a.feedback.moment, &n = b.feedback.moment;
  return same(a.header, b.header) && bits_equal(f.F_xH, g.F_xH) && f.saturated == g.saturated &&
         bits_equal(f.dcm_sync_term, g.dcm_sync_term) &&
         bits_equal(f.contact_force_term, g.contact_force_term) && bits_equal(m.M_zH_fb, n.M_zH_fb) &&
         m.saturated == n.saturated && bits_equal(m.robot_moment_term, n.robot_moment_term) &&
         bits_equal(m.contact_moment_term, n.contact_moment_term);
}

bool same(const ControlMsg& a, const ControlMsg& b) {
  return same(a.header, b.header) && a.command == b.command && a.scenario == b.scenario &&
         a.toggles.contact_force == b.toggles.contact_force && a.toggles.moment == b.toggles.moment &&
         a.toggles.ff_moment == b.toggles.ff_moment && a.toggles.robot_moment == b.toggles.robot_moment;
}

}  // namespace

MessageKind kind_of(const WireMessage& m) {
  return static_cast<MessageKind>(m.index() + 1);
}

const WireHeader& header_of(const WireMessage& m) {
  return std::visit([](const auto& x) -> const WireHeader& { return x.header; }, m);
}

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::PilotInput: return "pilot_input";
    case MessageKind::Telemetry: return "telemetry";
    case MessageKind::Haptic: return "haptic";
    case MessageKind::Control: return "control";
  }
  return "?";
}

std::vector<std::uint8_t> encode(const WireMessage& m) {
  Writer w;
  w.u32(0);
  write_header(w, kind_of(m), header_of(m));
  std::visit([&w](const auto& x) { write_body(w, x); }, m);
  const auto payload = static_cast<std::uint32_t>(w.out.size() - 4);
  be::endian_store<std::uint32_t, 4, be::order::little>(w.out.data(), payload);
  return w.out;
}

WireMessage decode_payload(const std::uint8_t* data, std::size_t size) {
  Reader r(data, size);
  WireHeader h;
  h.version = r.u8();
  if (h.version != kWireVersion) throw WireError("unsupported wire version " + std::to_string(h.version));
  const std::uint8_t kind = r.u8();
  h.session = r.u32();
  h.tick = r.u64();
  WireMessage m;
  switch (static_cast<MessageKind>(kind)) {
    case MessageKind::PilotInput: m = read_pilot(r); break;
    case MessageKind::Telemetry: m = read_telemetry(r); break;
    case MessageKind::Haptic: m = read_haptic(r); break;
    case MessageKind::Control: m = read_control(r); break;
    default: throw WireError("unknown message kind " + std::to_string(kind));
  }
  r.finish();
  std::visit([&h](auto& x) { x.header = h; }, m);
  return m;
}

WireMessage decode(const std::vector<std::uint8_t>& frame) {
  if (frame.size() < 4) throw WireError("frame shorter than its length prefix");
  const auto n = be::endian_load<std::uint32_t, 4, be::order::little>(frame.data());
  if (n != frame.size() - 4) throw WireError("length prefix does not match frame size");
  return decode_payload(frame.data() + 4, n);
}

bool wire_equal(const WireMessage& a, const WireMessage& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& x) { return same(x, std::get<std::decay_t<decltype(x)>>(b)); }, a);
}

void FrameReader::feed(const std::uint8_t* data, std::size_t size) {
  buffer_.insert(buffer_.end(), data, data + size);
}

std::optional<WireMessage> FrameReader::next() {
  while (buffer_.size() >= 4) {
    const auto n = be::endian_load<std::uint32_t, 4, be::order::little>(buffer_.data());
    if (n > kMaxFrame) {
      ++rejected_;
      buffer_.clear();
      return std::nullopt;
    }
    if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
    std::optional<WireMessage> out;
    try {
      out = decode_payload(buffer_.data() + 4, n);
    } catch (const WireError&) {
      ++rejected_;
    }
    buffer_.erase(buffer_.begin(), buffer_.begin() + 4 + n);
    if (out) return out;
  }
  return std::nullopt;
}

}  // namespace teleop
