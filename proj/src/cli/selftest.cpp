#include "fese/cli/selftest.hpp"

#include <functional>

#include "fese/crypto/dlog.hpp"
#include "fese/crypto/elgamal.hpp"
#include "fese/crypto/shares.hpp"
#include "fese/error.hpp"
#include "fese/protocol/client.hpp"
#include "fese/protocol/keygen.hpp"
#include "fese/protocol/views.hpp"

namespace fese {

namespace {

SchemeParams small_params(SchemeMode mode, QueryTransport query) {
  SchemeParams p;
  p.group = GroupKind::kTestSchnorr61;
  p.m = 256;
  p.l = 8;
  p.mode = mode;
  p.query = query;
  return p;
}

std::string elgamal_laws(Drbg& rng) {
  const Group& g = group_for(GroupKind::kRistretto255);
  auto kp = eg_keygen(g, rng);
  for (int k = 0; k < 20; ++k) {
    auto a = g.random_element(rng);
    auto b = g.random_element(rng);
    auto ca = eg_encrypt(g, kp.pub, a, rng);
    auto cb = eg_encrypt(g, kp.pub, b, rng);
    if (eg_decrypt(g, kp.secret, ca) != a) return "decryption round trip";
    if (eg_decrypt(g, kp.secret, eg_mul(g, ca, cb)) != g.mul(a, b)) return "homomorphic product";
    auto e = g.random_scalar(rng);
    if (eg_decrypt(g, kp.secret, eg_pow(g, ca, e)) != g.pow(a, e)) return "exponentiation";
  }
  return {};
}

std::string share_recovery(Drbg& rng) {
  const Group& g = group_for(GroupKind::kRistretto255);
  for (int k = 0; k < 5; ++k) {
    std::uint64_t s = rng.uniform(1u << 20);
    auto t = g.random_scalar(rng);
    auto set = raise_shares(g, split_secret(g, s, 8, 20, rng), t);
    auto base = g.pow_base(t);
    if (combine_shares(g, set.shares) != g.pow(base, g.scalar_from_u64(s)))
      return "share product";
    if (discrete_log_small(g, base, combine_shares(g, set.shares), 1u << 20) != s)
      return "discrete log recovery";
  }
  return {};
}

std::string bloom_lookup(Drbg& rng) {
  LshFamily lsh = LshFamily::build(64, 4, 4, rng);
  HashKey key{};
  rng.fill(key);
  CompositeFamily comp(lsh, BloomHasher(key, 2, 64));
  BfsStructure bfs(64);
  std::vector<BinaryTemplate> xs;
  for (std::uint64_t v = 0; v < 10; ++v) {
    xs.push_back(random_template(64, rng));
    bfs.add(comp, xs.back(), Tag{v});
  }
  for (std::uint64_t v = 0; v < 10; ++v) {
    auto hits = bfs.lookup(comp, xs[v], comp.size());
    if (std::find(hits.begin(), hits.end(), Tag{v}) == hits.end()) return "stored tag not found";
  }
  return {};
}

std::string round_trip(SchemeMode mode, Drbg& rng) {
  auto kg = keygen(small_params(mode, QueryTransport::kDirect), rng.fork("keygen").seed());
  IndexServer server(kg.state, rng.fork("server").seed());
  auto ch = server.connect();
  handshake(*ch, kg.pub.header());
  Sender sender(kg.pub, kg.allocator, rng.fork("sender").seed());
  Receiver receiver(kg.sec);
  std::vector<BinaryTemplate> xs;
  for (int k = 0; k < 8; ++k) {
    xs.push_back(random_template(kg.pub.params.n_bits, rng));
    sender.send(*ch, xs.back());
  }
  for (Identifier id = 0; id < xs.size(); ++id) {
    auto phi = receiver.retrieve(*ch, xs[id]);
    if (std::find(phi.begin(), phi.end(), id) == phi.end()) return "exact query missed";
    if (receiver.fetch_template(*ch, id) != xs[id]) return "payload round trip";
  }
  return {};
}

std::string batch_views(Drbg& rng) {
  auto kg = keygen(small_params(SchemeMode::kBase, QueryTransport::kObliviousBatch),
                   rng.fork("keygen").seed());
  const Seed server_seed = rng.fork("server").seed();
  auto v0 = capture_retrieve_view(kg.state, kg.sec, random_template(256, rng), server_seed);
  auto v1 = capture_retrieve_view(kg.state, kg.sec, random_template(256, rng), server_seed);
  return v0 == v1 ? std::string() : "views differ";
}

std::string index_serialization(Drbg& rng) {
  auto kg = keygen(small_params(SchemeMode::kBase, QueryTransport::kDirect),
                   rng.fork("keygen").seed());
  Bytes once = kg.state.serialize();
  Bytes twice = ServerState::deserialize(once).serialize();
  if (once != twice) return "index re-serialization differs";
  if (PublicBundle::deserialize(kg.pub.serialize()) != kg.pub) return "public bundle";
  if (SecretBundle::deserialize(kg.sec.serialize()) != kg.sec) return "secret bundle";
  return {};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const Seed& seed) {
  Drbg root(seed);
  const std::vector<std::pair<std::string, std::function<std::string(Drbg&)>>> checks = {
      {"elgamal-laws", elgamal_laws},
      {"share-recovery", share_recovery},
      {"bloom-lookup", bloom_lookup},
      {"round-trip-base", [](Drbg& r) { return round_trip(SchemeMode::kBase, r); }},
      {"round-trip-extended", [](Drbg& r) { return round_trip(SchemeMode::kExtended, r); }},
      {"batch-transcripts", batch_views},
      {"index-serialization", index_serialization},
  };
  std::vector<SelftestCheck> out;
  for (const auto& [name, fn] : checks) {
    Drbg rng = root.fork(name);
    SelftestCheck c{name, false, {}};
    try {
      c.detail = fn(rng);
      c.ok = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

int report_selftest(const std::vector<SelftestCheck>& checks, std::ostream& out) {
  int failures = 0;
  for (const auto& c : checks) {
    if (c.ok) {
      out << "PASS " << c.name << '\n';
    } else {
      out << "FAIL " << c.name << ": " << c.detail << '\n';
      ++failures;
    }
  }
  return failures;
}

}  // namespace fese
