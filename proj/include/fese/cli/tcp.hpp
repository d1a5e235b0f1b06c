#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "fese/pir/channel.hpp"
#include "fese/protocol/server.hpp"

namespace fese {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// "host:port"; port 0 lets the kernel choose when listening. Throws kConfig.
Endpoint parse_endpoint(std::string_view text);

/// Client end of a TCP connection carrying wire frames.
class TcpChannel final : public Channel {
 public:
  /// Throws kTransport if the server cannot be reached.
  explicit TcpChannel(const Endpoint& endpoint);
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  Frame exchange(const Frame& request) override;

 private:
  int fd_ = -1;
};

/// Serves an IndexServer over TCP, one thread per connection, each with its
/// own session. Malformed frames get an ERR reply and the connection is
/// closed.
class TcpServer {
 public:
  TcpServer(IndexServer& server, const Endpoint& listen);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }

  /// Accepts connections until stop() is called.
  void run();
  /// Safe from any thread or a signal-driven watcher; returns once every
  /// connection thread has finished.
  void stop();

 private:
  struct Connection {
    int fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void serve_connection(Connection& conn);
  void reap_finished();

  IndexServer& server_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex conn_mutex_;
  std::list<Connection> connections_;
};

/// Reads one frame; false on a clean EOF before the first byte. Throws
/// kTransport on a truncated frame and kFormat on a bad header.
bool read_frame(int fd, Frame& frame);
void write_frame(int fd, const Frame& frame);

}  // namespace fese
