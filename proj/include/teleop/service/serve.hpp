#pragma once

#include "teleop/service/config.hpp"
#include "teleop/service/runlog.hpp"
#include "teleop/service/wire.hpp"

#include <memory>
#include <string>
#include <vector>

namespace teleop {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 7070;        // wire stream; 0 picks a free port
  int http_port = 7071;   // schema document; 0 picks a free port, -1 disables
  std::string fixture_dir;
  TeleopConfig config;
  std::string log_dir;    // one log per session when set
  int max_sessions = 0;   // run() returns after this many; 0 = unlimited
  bool realtime = true;   // pace ticks at the control period
};

struct ServeStats {
  int sessions = 0;
  long ticks = 0;
  std::size_t rejected = 0;  // malformed or unexpected messages
  std::size_t dropped = 0;   // queue overflow
  double jitter_p99_ms = 0.0;
  std::vector<std::string> logs;
  RunLog last_log;
};

TelemetryMsg telemetry_message(const TickRecord& rec, std::uint32_t session);
HapticMsg haptic_message(const TickRecord& rec, std::uint32_t session);

// Live bridge. A network thread owns the socket and talks to the control
// loop only through single-producer/single-consumer queues; the loop never
// blocks on the network. One console connection and one session at a time.
//
// Protocol: the console sends control(select), optionally control(feedback),
// then control(start), and streams pilot_input tagged with the session id
// taken from the first telemetry frame. Haptics go out every tick, telemetry
// every `session.telemetry_decimation` ticks, and control(stop) marks the end
// of a session.
class Server {
 public:
  explicit Server(ServeOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  int port() const;
  int http_port() const;
  void run();
  void stop();
  ServeStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace teleop
