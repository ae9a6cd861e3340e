#pragma once

#include "teleop/service/wire.hpp"

#include <chrono>
#include <optional>
#include <string>

namespace teleop {

// Owning POSIX socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.release()) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();
  void close();

 private:
  int fd_ = -1;
};

// Listening TCP socket; port 0 picks a free port.
Socket listen_tcp(const std::string& host, int port, int* bound_port = nullptr);
Socket connect_tcp(const std::string& host, int port);
// Writes the whole buffer; false when the peer has gone.
bool send_all(int fd, const std::uint8_t* data, std::size_t size);

// Blocking client used by tests and the CLI smoke path.
class WireClient {
 public:
  WireClient(const std::string& host, int port);
  bool send(const WireMessage& m);
  bool send_raw(const std::vector<std::uint8_t>& bytes);
  // Next decoded message, or nullopt after the timeout or on disconnect.
  std::optional<WireMessage> receive(std::chrono::milliseconds timeout);
  std::size_t rejected() const { return reader_.rejected(); }
  void close() { socket_.close(); }

 private:
  Socket socket_;
  FrameReader reader_;
};

}  // namespace teleop
