#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "fese/cli/config.hpp"
#include "fese/cli/files.hpp"
#include "fese/cli/tcp.hpp"
#include "fese/identification/identification.hpp"
#include "fese/protocol/keygen.hpp"
#include "support.hpp"

using namespace fese;
using support::code_of;
namespace fs = std::filesystem;

namespace {

SchemeParams small() {
  SchemeParams p;
  p.group = GroupKind::kTestSchnorr61;
  p.m = 256;
  p.l = 8;
  return p;
}

Bytes as_bytes_view(std::string_view s) { return Bytes(s.begin(), s.end()); }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("fese_test_cli_" + name + "_" +
                                              std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct RunningServer {
  IndexServer index;
  TcpServer tcp;
  std::thread thread;

  RunningServer(const ServerState& state)
      : index(state, seed_from_u64(1)), tcp(index, Endpoint{"127.0.0.1", 0}) {
    thread = std::thread([this] { tcp.run(); });
  }
  ~RunningServer() {
    tcp.stop();
    thread.join();
  }
  Endpoint endpoint() const { return {"127.0.0.1", tcp.port()}; }
};

}  // namespace

TEST_SUITE("config files") {
  TEST_CASE("key value parsing") {
    auto kv = parse_key_values("# comment\n\n  m = 1024 \nmode=extended\n\tgroup =test-schnorr61\n");
    REQUIRE(kv.size() == 3);
    CHECK(kv[0] == std::pair<std::string, std::string>{"m", "1024"});
    CHECK(kv[1] == std::pair<std::string, std::string>{"mode", "extended"});
    CHECK(kv[2].second == "test-schnorr61");
    CHECK(code_of([] { parse_key_values("m 1024\n"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { parse_key_values(" = 3\n"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { parse_key_values("m = 1\nm = 2\n"); }) == ErrorCode::kConfig);
  }

  TEST_CASE("parameters load from a file") {
    fs::path dir = scratch("params");
    CHECK(load_params("") == SchemeParams{});
    std::string path = (dir / "p.cfg").string();
    write_file(path, as_bytes_view("m = 1024\nl = 4\nmode = extended\n"));
    SchemeParams p = load_params(path);
    CHECK(p.m == 1024);
    CHECK(p.l == 4);
    CHECK(p.mode == SchemeMode::kExtended);
    write_file(path, as_bytes_view("tau = 5\nmode = extended\n"));
    CHECK(code_of([&] { load_params(path); }) == ErrorCode::kConfig);
    write_file(path, as_bytes_view("speed = 3\n"));
    CHECK(code_of([&] { load_params(path); }) == ErrorCode::kConfig);
    CHECK(code_of([&] { load_params((dir / "missing.cfg").string()); }) == ErrorCode::kConfig);
    ::setenv("FESE_CONFIG", path.c_str(), 1);
    CHECK(default_config_path() == path);
    ::unsetenv("FESE_CONFIG");
    CHECK(default_config_path().empty());
    fs::remove_all(dir);
  }

  TEST_CASE("endpoints") {
    auto e = parse_endpoint("127.0.0.1:7450");
    CHECK(e.host == "127.0.0.1");
    CHECK(e.port == 7450);
    CHECK(parse_endpoint("localhost:0").port == 0);
    CHECK(code_of([] { parse_endpoint("localhost"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { parse_endpoint("h:70000"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { parse_endpoint(":80"); }) == ErrorCode::kConfig);
  }

  TEST_CASE("workspace files round trip") {
    fs::path dir = scratch("ws");
    Workspace ws{dir.string()};
    auto kg = keygen(small(), seed_from_u64(3));
    write_file(ws.public_key(), kg.pub.serialize());
    write_file(ws.secret_key(), kg.sec.serialize());
    ws.save_index(kg.state);
    ws.save_allocator(kg.allocator);
    CHECK(ws.load_registry().size() == 0);
    Registry reg;
    reg.add(0, "someone");
    ws.save_registry(reg);

    CHECK(ws.load_public() == kg.pub);
    CHECK(ws.load_secret() == kg.sec);
    CHECK(ws.load_index() == kg.state);
    CHECK(ws.load_allocator() == kg.allocator);
    CHECK(ws.load_registry() == reg);

    write_file(ws.index(), Bytes{1, 2, 3});
    try {
      ws.load_index();
      FAIL("expected a format error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFormat);
      CHECK(std::string(e.what()).find(ws.index()) != std::string::npos);
    }
    fs::remove_all(dir);
    CHECK(code_of([&] { ws.load_public(); }) == ErrorCode::kFormat);
  }
}

TEST_SUITE("tcp") {
  TEST_CASE("remote identification matches in-process results") {
    auto kg = keygen(small(), seed_from_u64(4));
    RunningServer remote(kg.state);
    IndexServer local(kg.state, seed_from_u64(1));
    auto local_ch = local.connect();

    TcpChannel tcp(remote.endpoint());
    handshake(tcp, kg.pub.header());
    Sender s_remote(kg.pub, kg.allocator, seed_from_u64(5));
    Sender s_local(kg.pub, kg.allocator, seed_from_u64(5));
    Registry r_remote, r_local;
    Drbg rng(seed_from_u64(6));
    std::vector<BinaryTemplate> xs;
    for (int k = 0; k < 5; ++k) {
      xs.push_back(random_template(256, rng));
      auto a = enroll("u" + std::to_string(k), xs.back(), s_remote, tcp, r_remote);
      auto b = enroll("u" + std::to_string(k), xs.back(), s_local, *local_ch, r_local);
      CHECK(a.identifier == b.identifier);
    }
    CHECK(remote.index.snapshot() == local.snapshot());

    Receiver rec(kg.sec);
    for (const auto& x : xs) {
      auto q = perturb_exact(x, 2, rng);
      auto a = identify(q, rec, tcp, r_remote);
      auto b = identify(q, rec, *local_ch, r_local);
      CHECK(a.identities() == b.identities());
    }
  }

  TEST_CASE("parallel clients") {
    auto kg = keygen(small(), seed_from_u64(7));
    RunningServer remote(kg.state);
    {
      TcpChannel ch(remote.endpoint());
      Sender s(kg.pub, kg.allocator, seed_from_u64(8));
      Drbg rng(seed_from_u64(9));
      for (int k = 0; k < 3; ++k) s.send(ch, random_template(256, rng));
    }
    std::atomic<int> ok{0};
    std::vector<std::thread> clients;
    for (int t = 0; t < 4; ++t)
      clients.emplace_back([&] {
        TcpChannel ch(remote.endpoint());
        Receiver r(kg.sec);
        if (r.fetch_payload(ch, 2).size() > 0) ++ok;
      });
    for (auto& c : clients) c.join();
    CHECK(ok == 4);
  }

  TEST_CASE("malformed input gets an error frame and a closed connection") {
    auto kg = keygen(small(), seed_from_u64(10));
    RunningServer remote(kg.state);
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(remote.tcp.port());
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    std::uint8_t junk[5] = {0x7f, 0, 0, 0, 0};
    REQUIRE(::write(fd, junk, sizeof(junk)) == 5);
    Frame reply;
    REQUIRE(read_frame(fd, reply));
    CHECK(reply.type == FrameType::kErr);
    CHECK(!read_frame(fd, reply));
    ::close(fd);
  }

  TEST_CASE("unreachable server") {
    // Bind and close a port so nothing listens there.
    auto kg = keygen(small(), seed_from_u64(11));
    std::uint16_t port;
    {
      RunningServer tmp(kg.state);
      port = tmp.tcp.port();
    }
    CHECK(code_of([&] { TcpChannel ch(Endpoint{"127.0.0.1", port}); }) == ErrorCode::kTransport);
  }
}
