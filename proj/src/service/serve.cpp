#include "teleop/service/serve.hpp"

#include "teleop/service/net.hpp"
#include "teleop/service/run.hpp"
#include "teleop/service/schema.hpp"

#include <boost/lockfree/spsc_queue.hpp>
#include <httplib.h>

#include <poll.h>
#include <sys/socket.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <thread>

namespace teleop {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

TelemetryMsg telemetry_message(const TickRecord& rec, std::uint32_t session) {
  TelemetryMsg m;
  m.header.session = session;
  m.header.tick = static_cast<std::uint64_t>(rec.tick);
  const RobotState& r = rec.robot;
  m.x = r.x;
  m.xdot = r.xdot;
  m.theta = r.theta;
  m.thetadot = r.thetadot;
  m.phi = r.phi;
  m.phidot = r.phidot;
  m.base_x = rec.base_x;
  m.base_y = rec.base_y;
  m.q = r.q;
  m.mode_s = rec.modes.mode_s;
  m.mode_y = rec.modes.mode_y;
  m.mode_A = rec.modes.mode_A;
  m.x_R_des = rec.modes.x_R_des;
  m.phi_offset = rec.modes.phi_offset;
  m.alpha = rec.modes.alpha;
  m.box_pose = rec.box_pose;
  m.object_pose = rec.object_pose;
  m.contact = rec.contact.committed;
  m.fault = rec.fault;
  return m;
}

HapticMsg haptic_message(const TickRecord& rec, std::uint32_t session) {
  HapticMsg m;
  m.header.session = session;
  m.header.tick = static_cast<std::uint64_t>(rec.tick);
  m.feedback = rec.haptic;
  return m;
}

struct Server::Impl {
  ServeOptions opt;
  Socket listener;
  int port = 0;
  int http_port = -1;
  std::atomic<bool> stopping{false};
  boost::lockfree::spsc_queue<WireMessage, boost::lockfree::capacity<1024>> inbound;
  boost::lockfree::spsc_queue<std::vector<std::uint8_t>, boost::lockfree::capacity<4096>> outbound;
  std::atomic<std::size_t> net_rejected{0};
  std::atomic<std::size_t> dropped{0};
  std::thread net_thread;
  std::thread http_thread;
  httplib::Server http;

  mutable std::mutex stats_mutex;
  ServeStats stats;
  std::vector<double> jitter_ms;

  std::string selected;
  FeedbackToggles toggles;
  std::uint32_t next_session = 1;

  explicit Impl(ServeOptions o) : opt(std::move(o)) {
    opt.config.validate();
    listener = listen_tcp(opt.host, opt.port, &port);
    toggles = FeedbackToggles{opt.config.haptics.enable_contact_force, opt.config.haptics.enable_moment_fb,
                              opt.config.haptics.enable_ff_moment, opt.config.haptics.include_robot_moment};
    if (opt.http_port >= 0) {
      const std::string schema = wire_schema_json();
      http.Get("/schema", [schema](const httplib::Request&, httplib::Response& res) {
        res.set_content(schema, "application/json");
      });
      http.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok\n", "text/plain");
      });
      http_port = opt.http_port == 0 ? http.bind_to_any_port(opt.host)
                                     : (http.bind_to_port(opt.host, opt.http_port) ? opt.http_port : -1);
      if (http_port < 0) throw std::runtime_error("cannot bind the schema endpoint");
      http_thread = std::thread([this] { http.listen_after_bind(); });
    }
    net_thread = std::thread([this] { network_loop(); });
  }

  ~Impl() {
    stopping = true;
    if (opt.http_port >= 0) http.stop();
    if (http_thread.joinable()) http_thread.join();
    if (net_thread.joinable()) net_thread.join();
  }

  void network_loop() {
    Socket client;
    FrameReader reader;
    std::size_t seen_rejects = 0;
    std::vector<std::uint8_t> frame;
    while (!stopping) {
      if (!client.valid()) {
        while (outbound.pop(frame)) {
        }
        pollfd p{listener.fd(), POLLIN, 0};
        if (::poll(&p, 1, 20) > 0) {
          client = Socket(::accept(listener.fd(), nullptr, nullptr));
          reader = FrameReader{};
          seen_rejects = 0;
        }
        continue;
      }
      while (outbound.pop(frame)) {
        if (!send_all(client.fd(), frame.data(), frame.size())) {
          client.close();
          break;
        }
      }
      if (!client.valid()) continue;
      pollfd p{client.fd(), POLLIN, 0};
      if (::poll(&p, 1, 1) <= 0) continue;
      std::uint8_t buf[4096];
      const ssize_t n = ::recv(client.fd(), buf, sizeof buf, 0);
      if (n <= 0) {
        client.close();
        continue;
      }
      reader.feed(buf, static_cast<std::size_t>(n));
      while (auto m = reader.next()) {
        if (!inbound.push(std::move(*m))) ++dropped;
      }
      net_rejected += reader.rejected() - seen_rejects;
      seen_rejects = reader.rejected();
    }
  }

  void send(const WireMessage& m) {
    if (!outbound.push(encode(m))) ++dropped;
  }

  void reject() {
    std::lock_guard<std::mutex> lock(stats_mutex);
    ++stats.rejected;
  }

  ControlMsg control(ControlCommand c, std::uint32_t session, std::uint64_t tick) {
    ControlMsg m;
    m.header.session = session;
    m.header.tick = tick;
    m.command = c;
    m.scenario = selected;
    m.toggles = toggles;
    return m;
  }

  // Returns true when a session should start.
  bool handle_idle(const WireMessage& msg) {
    const auto* c = std::get_if<ControlMsg>(&msg);
    if (!c) {
      if (!std::holds_alternative<PilotInputMsg>(msg)) reject();
      return false;
    }
    switch (c->command) {
      case ControlCommand::Select:
        try {
          find_scenario(c->scenario, opt.fixture_dir);
          selected = c->scenario;
        } catch (const std::exception&) {
          reject();
        }
        return false;
      case ControlCommand::Feedback: toggles = c->toggles; return false;
      case ControlCommand::Start:
        if (selected.empty()) reject();
        return !selected.empty();
      case ControlCommand::Stop: return false;
    }
    return false;
  }

  void run_session() {
    const Scenario scenario = load_scenario(find_scenario(selected, opt.fixture_dir));
    TeleopConfig cfg = opt.config;
    cfg.haptics.enable_contact_force = toggles.contact_force;
    cfg.haptics.enable_moment_fb = toggles.moment;
    cfg.haptics.enable_ff_moment = toggles.ff_moment;
    cfg.haptics.include_robot_moment = toggles.robot_moment;
    Session session(scenario, cfg);
    const std::uint32_t id = next_session++;
    PilotInput initial;
    initial.q_aH = scenario.arm_q;
    LiveInput live(cfg.timing, initial);
    RunLog log = log_header(session);

    const auto period = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(cfg.timing.control_dt));
    send(control(ControlCommand::Start, id, 0));
    Clock::time_point deadline = Clock::now();
    Clock::time_point last_wake = deadline;
    bool stop_requested = false;
    std::vector<double> jitter;
    WireMessage msg;
    while (!session.done() && !stop_requested && !stopping) {
      if (opt.realtime && !session.faulted()) {
        deadline += period;
        std::this_thread::sleep_until(deadline);
        const Clock::time_point now = Clock::now();
        if (session.tick() > 0) {
          const double ms = std::chrono::duration<double, std::milli>(now - last_wake - period).count();
          jitter.push_back(std::abs(ms));
        }
        last_wake = now;
      }
      while (inbound.pop(msg)) {
        if (const auto* p = std::get_if<PilotInputMsg>(&msg)) {
          if (p->header.session == id) live.receive(p->input);
          else reject();
        } else if (const auto* c = std::get_if<ControlMsg>(&msg)) {
          if (c->command == ControlCommand::Stop) stop_requested = true;
          else reject();
        } else {
          reject();
        }
      }
      if (stop_requested) break;
      const std::optional<PilotInput> in = live.next();
      const TickRecord rec = in ? session.step(*in) : session.safe_stop_step();
      if (rec.fault && log.fault_tick < 0) log.fault_reason = "pilot stream gap";
      log.append(rec);
      send(haptic_message(rec, id));
      if (rec.tick % cfg.timing.telemetry_decimation == 0 || session.done()) {
        send(telemetry_message(rec, id));
      }
    }
    // A stopped session keeps a complete log of the ticks it ran.
    log.scenario["duration"] = format_double(static_cast<double>(log.rows.size()) * cfg.timing.control_dt);
    send(control(ControlCommand::Stop, id, log.rows.size()));

    std::lock_guard<std::mutex> lock(stats_mutex);
    ++stats.sessions;
    jitter_ms.insert(jitter_ms.end(), jitter.begin(), jitter.end());
    stats.ticks += static_cast<long>(log.rows.size());
    if (!opt.log_dir.empty() && !log.rows.empty()) {
      fs::create_directories(opt.log_dir);
      const std::string path =
          (fs::path(opt.log_dir) / ("session-" + std::to_string(id) + "-" + scenario.name + ".log")).string();
      write_log(log, path);
      stats.logs.push_back(path);
    }
    stats.last_log = std::move(log);
  }

  void run() {
    WireMessage msg;
    while (!stopping && (opt.max_sessions == 0 || stats_sessions() < opt.max_sessions)) {
      bool start = false;
      while (!start && inbound.pop(msg)) start = handle_idle(msg);
      if (start) {
        run_session();
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
    }
  }

  int stats_sessions() {
    std::lock_guard<std::mutex> lock(stats_mutex);
    return stats.sessions;
  }
};

Server::Server(ServeOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Server::~Server() = default;
int Server::port() const { return impl_->port; }
int Server::http_port() const { return impl_->http_port; }
void Server::run() { impl_->run(); }
void Server::stop() { impl_->stopping = true; }

ServeStats Server::stats() const {
  std::lock_guard<std::mutex> lock(impl_->stats_mutex);
  ServeStats s = impl_->stats;
  s.rejected += impl_->net_rejected;
  s.dropped = impl_->dropped;
  std::vector<double> j = impl_->jitter_ms;
  if (!j.empty()) {
    const std::size_t k = std::min(j.size() - 1, static_cast<std::size_t>(0.99 * static_cast<double>(j.size())));
    std::nth_element(j.begin(), j.begin() + static_cast<std::ptrdiff_t>(k), j.end());
    s.jitter_p99_ms = j[k];
  }
  return s;
}

}  // namespace teleop
