#pragma once

#include "teleop/core/types.hpp"
#include "teleop/haptics/haptics.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace teleop {

inline constexpr std::uint8_t kWireVersion = 1;
// Frames above this size are rejected before their payload is read.
inline constexpr std::uint32_t kMaxFrame = 4096;

enum class MessageKind : std::uint8_t {
  PilotInput = 1,
  Telemetry = 2,
  Haptic = 3,
  Control = 4,
};

struct WireHeader {
  std::uint8_t version = kWireVersion;
  std::uint32_t session = 0;
  std::uint64_t tick = 0;
};

struct PilotInputMsg {
  WireHeader header;
  PilotInput input;
};

struct TelemetryMsg {
  WireHeader header;
  double x = 0.0, xdot = 0.0, theta = 0.0, thetadot = 0.0, phi = 0.0, phidot = 0.0;
  double base_x = 0.0, base_y = 0.0;
  PerArm<Vec4> q{Vec4::Zero(), Vec4::Zero()};
  Mode mode_s = Mode::P, mode_y = Mode::P, mode_A = Mode::P;
  double x_R_des = 0.0, phi_offset = 0.0, alpha = 0.0;
  Vec3 box_pose = Vec3::Zero();
  Vec3 object_pose = Vec3::Zero();
  Contact contact = Contact::None;
  bool fault = false;
};

struct HapticMsg {
  WireHeader header;
  HapticFeedback feedback;
};

enum class ControlCommand : std::uint8_t {
  Start = 1,     // start the selected scenario
  Stop = 2,      // end the session
  Select = 3,    // choose a scenario by name
  Feedback = 4,  // set the feedback toggles
};

struct FeedbackToggles {
  bool contact_force = false;
  bool moment = false;
  bool ff_moment = false;
  bool robot_moment = false;
};

struct ControlMsg {
  WireHeader header;
  ControlCommand command = ControlCommand::Start;
  std::string scenario;  // Select; at most 255 bytes
  FeedbackToggles toggles;
};

using WireMessage = std::variant<PilotInputMsg, TelemetryMsg, HapticMsg, ControlMsg>;

struct WireError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MessageKind kind_of(const WireMessage& m);
const WireHeader& header_of(const WireMessage& m);
const char* to_string(MessageKind k);

// Full frame: u32 LE payload length followed by the payload.
std::vector<std::uint8_t> encode(const WireMessage& m);
// Decodes one payload (without the length prefix). Throws WireError.
WireMessage decode_payload(const std::uint8_t* data, std::size_t size);
WireMessage decode(const std::vector<std::uint8_t>& frame);

// Field-for-field equality; doubles compare by bit pattern.
bool wire_equal(const WireMessage& a, const WireMessage& b);

// Reassembles frames from a byte stream. Malformed frames are dropped and
// counted; an oversized length prefix discards the buffered bytes.
class FrameReader {
 public:
  void feed(const std::uint8_t* data, std::size_t size);
  std::optional<WireMessage> next();
  std::size_t rejected() const { return rejected_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t rejected_ = 0;
};

}  // namespace teleop
