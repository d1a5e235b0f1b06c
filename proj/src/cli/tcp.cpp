#include "fese/cli/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "fese/error.hpp"

namespace fese {

namespace {

std::string errno_text() { return std::strerror(errno); }

bool read_exact(int fd, std::uint8_t* out, std::size_t n, bool allow_eof) {
  std::size_t got = 0;
  while (got < n) {
    ssize_t r = ::recv(fd, out + got, n - got, 0);
    if (r == 0) {
      if (allow_eof && got == 0) return false;
      fail(ErrorCode::kTransport, "connection closed mid-frame");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kTransport, "receive failed: " + errno_text());
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
  auto colon = text.rfind(':');
  require(colon != std::string_view::npos && colon > 0, ErrorCode::kConfig,
          "endpoint must look like host:port, got \"" + std::string(text) + "\"");
  Endpoint ep;
  ep.host = std::string(text.substr(0, colon));
  auto port = text.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  require(ec == std::errc() && ptr == port.data() + port.size() && value <= 65535,
          ErrorCode::kConfig, "bad port in \"" + std::string(text) + "\"");
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

bool read_frame(int fd, Frame& frame) {
  std::uint8_t header[kFrameHeaderSize];
  if (!read_exact(fd, header, sizeof header, true)) return false;
  std::uint32_t len = parse_frame_header(ByteView(header, sizeof header), frame.type);
  frame.payload.resize(len);
  if (len) read_exact(fd, frame.payload.data(), len, false);
  return true;
}

void write_frame(int fd, const Frame& frame) {
  Bytes wire = encode_frame(frame);
  std::size_t sent = 0;
  while (sent < wire.size()) {
    ssize_t r = ::send(fd, wire.data() + sent, wire.size() - sent, MSG_NOSIGNAL);
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kTransport, "send failed: " + errno_text());
    }
    sent += static_cast<std::size_t>(r);
  }
}

TcpChannel::TcpChannel(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(endpoint.port);
  int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res);
  require(rc == 0, ErrorCode::kTransport,
          "cannot resolve " + endpoint.host + ": " + ::gai_strerror(rc));
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    last_error = errno_text();
    ::close(fd);
  }
  ::freeaddrinfo(res);
  require(fd_ >= 0, ErrorCode::kTransport,
          "cannot connect to " + endpoint.host + ":" + port + ": " + last_error);
  set_nodelay(fd_);
}

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

Frame TcpChannel::exchange(const Frame& request) {
  write_frame(fd_, request);
  Frame reply;
  require(read_frame(fd_, reply), ErrorCode::kTransport, "server closed the connection");
  return reply;
}

TcpServer::TcpServer(IndexServer& server, const Endpoint& listen) : server_(server) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(listen.port);
  int rc = ::getaddrinfo(listen.host.c_str(), port.c_str(), &hints, &res);
  require(rc == 0, ErrorCode::kTransport,
          "cannot resolve " + listen.host + ": " + ::gai_strerror(rc));
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = errno_text();
    ::close(fd);
  }
  ::freeaddrinfo(res);
  require(listen_fd_ >= 0, ErrorCode::kTransport,
          "cannot listen on " + listen.host + ":" + port + ": " + last_error);

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

TcpServer::~TcpServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::run() {
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    int rc = ::poll(&p, 1, 100);
    if (rc <= 0 || !(p.revents & POLLIN)) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    set_nodelay(fd);
    std::lock_guard lock(conn_mutex_);
    if (stopping_.load()) {
      ::close(fd);
      break;
    }
    reap_finished();
    Connection& conn = connections_.emplace_back();
    conn.fd = fd;
    conn.thread = std::thread([this, &conn] { serve_connection(conn); });
  }
}

void TcpServer::reap_finished() {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (!it->done.load()) {
      ++it;
      continue;
    }
    it->thread.join();
    ::close(it->fd);
    it = connections_.erase(it);
  }
}

void TcpServer::stop() {
  stopping_.store(true);
  std::list<Connection> conns;
  {
    std::lock_guard lock(conn_mutex_);
    conns.swap(connections_);
  }
  for (auto& c : conns) ::shutdown(c.fd, SHUT_RDWR);
  for (auto& c : conns) {
    if (c.thread.joinable()) c.thread.join();
    ::close(c.fd);
  }
}

void TcpServer::serve_connection(Connection& conn) {
  const int fd = conn.fd;
  ServerSession session;
  try {
    Frame request;
    while (!stopping_.load()) {
      try {
        if (!read_frame(fd, request)) break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTransport) write_frame(fd, make_error_frame(e.code(), e.what()));
        break;
      }
      write_frame(fd, server_.handle(request, session));
    }
  } catch (const Error&) {
    // peer went away while we were replying
  }
  ::shutdown(fd, SHUT_RDWR);
  conn.done.store(true);
}

}  // namespace fese
