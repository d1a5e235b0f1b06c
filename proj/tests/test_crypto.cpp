#include <algorithm>

#include "doctest.h"
#include "fese/crypto/dlog.hpp"
#include "fese/crypto/elgamal.hpp"
#include "fese/crypto/group.hpp"
#include "fese/crypto/payload.hpp"
#include "fese/crypto/shares.hpp"
#include "fese/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fese;
using support::code_of;

namespace {

constexpr std::uint64_t kP = 4611686018427377339ull;
constexpr std::uint64_t kQ = 2305843009213688669ull;

std::uint64_t be64(const GroupElement& e) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | e.bytes[i];
  return v;
}

const GroupKind kKinds[] = {GroupKind::kTestSchnorr61, GroupKind::kRistretto255};

}  // namespace

TEST_SUITE("group") {
  TEST_CASE("test group constants form a safe-prime subgroup") {
    CHECK(oracle::is_prime(kP));
    CHECK(oracle::is_prime(kQ));
    CHECK(kP == 2 * kQ + 1);
    CHECK(oracle::powmod(4, kQ, kP) == 1);
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    CHECK(be64(g.generator()) == 4);
    CHECK(be64(g.identity()) == 1);
  }

  TEST_CASE("test group exponentiation matches square-and-multiply") {
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    Drbg rng(seed_from_u64(1));
    for (int k = 0; k < 200; ++k) {
      std::uint64_t e = rng.uniform(kQ);
      CHECK(be64(g.pow_base(g.scalar_from_u64(e))) == oracle::powmod(4, e, kP));
      auto x = g.random_element(rng);
      CHECK(oracle::powmod(be64(x), kQ, kP) == 1);
      CHECK(be64(g.mul(x, g.generator())) == oracle::mulmod(be64(x), 4, kP));
    }
  }

  TEST_CASE("group laws hold in both groups") {
    for (auto kind : kKinds) {
      const Group& g = group_for(kind);
      Drbg rng(seed_from_u64(2));
      for (int k = 0; k < 50; ++k) {
        auto a = g.random_element(rng), b = g.random_element(rng), c = g.random_element(rng);
        CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
        CHECK(g.mul(a, b) == g.mul(b, a));
        CHECK(g.mul(a, g.identity()) == a);
        CHECK(g.mul(a, g.inverse(a)) == g.identity());
        auto s = g.random_scalar(rng), t = g.random_scalar(rng);
        CHECK(g.mul(g.pow(a, s), g.pow(a, t)) == g.pow(a, g.scalar_add(s, t)));
        CHECK(g.pow(g.pow(a, s), t) == g.pow(a, g.scalar_mul(s, t)));
        CHECK(g.mul(g.pow(a, s), g.pow(a, g.scalar_neg(s))) == g.identity());
        CHECK(g.pow_base(s) == g.pow(g.generator(), s));
        CHECK(g.decode(g.encode(a)) == a);
        ByteWriter w;
        g.encode_scalar(s, w);
        CHECK(g.decode_scalar(w.bytes()) == s);
      }
      CHECK(g.pow(g.random_element(rng), g.scalar_from_u64(0)) == g.identity());
    }
  }

  TEST_CASE("decode rejects non-elements") {
    const Group& s = group_for(GroupKind::kTestSchnorr61);
    // 2 is a non-residue mod p (p = 3 mod 8), so it lies outside the subgroup.
    Bytes two = {0, 0, 0, 0, 0, 0, 0, 2};
    CHECK(code_of([&] { s.decode(two); }) == ErrorCode::kEncoding);
    Bytes zero(8, 0);
    CHECK(code_of([&] { s.decode(zero); }) == ErrorCode::kEncoding);
    Bytes big = {0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff};
    CHECK(code_of([&] { s.decode(big); }) == ErrorCode::kEncoding);
    CHECK(code_of([&] { s.decode(Bytes(7, 1)); }) == ErrorCode::kEncoding);

    const Group& r = group_for(GroupKind::kRistretto255);
    Bytes bad(32, 0xff);
    CHECK(code_of([&] { r.decode(bad); }) == ErrorCode::kEncoding);
    Bytes q_le(32, 0xff);  // scalar >= group order
    CHECK(code_of([&] { r.decode_scalar(q_le); }) == ErrorCode::kEncoding);
  }

  TEST_CASE("second generator is fixed and differs from g") {
    for (auto kind : kKinds) {
      const Group& g = group_for(kind);
      CHECK(g.second_generator() != g.generator());
      CHECK(g.second_generator() != g.identity());
      Bytes d = {1, 2, 3};
      CHECK(g.hash_to_element("a", d) == g.hash_to_element("a", d));
      CHECK(g.hash_to_element("a", d) != g.hash_to_element("b", d));
    }
    CHECK(parse_group_kind("ristretto255") == GroupKind::kRistretto255);
    CHECK(code_of([] { parse_group_kind("p256"); }) == ErrorCode::kConfig);
  }
}

TEST_SUITE("elgamal") {
  TEST_CASE("round trip, product and power in both groups") {
    for (auto kind : kKinds) {
      const Group& g = group_for(kind);
      Drbg rng(seed_from_u64(3));
      auto kp = eg_keygen(g, rng);
      CHECK(g.pow_base(kp.secret) == kp.pub);
      for (int k = 0; k < 40; ++k) {
        auto a = g.random_element(rng), b = g.random_element(rng);
        auto ca = eg_encrypt(g, kp.pub, a, rng), cb = eg_encrypt(g, kp.pub, b, rng);
        CHECK(eg_decrypt(g, kp.secret, ca) == a);
        CHECK(eg_decrypt(g, kp.secret, eg_mul(g, ca, cb)) == g.mul(a, b));
        auto e = g.random_scalar(rng);
        CHECK(eg_decrypt(g, kp.secret, eg_pow(g, ca, e)) == g.pow(a, e));
        auto re = eg_rerandomize(g, kp.pub, ca, rng);
        CHECK(re != ca);
        CHECK(eg_decrypt(g, kp.secret, re) == a);
      }
      CHECK(eg_decrypt(g, kp.secret, eg_encrypt(g, kp.pub, g.identity(), rng)) == g.identity());
    }
  }

  TEST_CASE("misuse is rejected") {
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    Drbg rng(seed_from_u64(4));
    auto kp = eg_keygen(g, rng);
    auto c = eg_encrypt(g, kp.pub, g.generator(), rng);
    CHECK(code_of([&] { eg_pow(g, c, Scalar{}); }) == ErrorCode::kParameter);
    GroupElement two;
    two.bytes[7] = 2;
    CHECK(code_of([&] { eg_encrypt(g, kp.pub, two, rng); }) == ErrorCode::kEncoding);
  }

  TEST_CASE("ciphertext encoding round trip") {
    const Group& g = group_for(GroupKind::kRistretto255);
    Drbg rng(seed_from_u64(5));
    auto kp = eg_keygen(g, rng);
    auto c = eg_encrypt(g, kp.pub, g.random_element(rng), rng);
    ByteWriter w;
    encode_ciphertext(g, c, w);
    CHECK(w.size() == 64);
    ByteReader r(w.bytes());
    CHECK(decode_ciphertext(g, r) == c);
  }
}

TEST_SUITE("shares") {
  TEST_CASE("shares multiply to g^s and re-randomize to (g^t)^s") {
    for (auto kind : kKinds) {
      const Group& g = group_for(kind);
      Drbg rng(seed_from_u64(6));
      for (int k = 0; k < 20; ++k) {
        std::uint64_t s = rng.uniform(1u << 20);
        std::size_t n = 2 + rng.uniform(40);
        auto set = split_secret(g, s, n, 20, rng);
        CHECK(set.size() == n);
        CHECK(combine_shares(g, set.shares) == g.pow_base(g.scalar_from_u64(s)));
        auto t = g.random_scalar(rng);
        auto raised = raise_shares(g, set, t);
        CHECK(combine_shares(g, raised.shares) ==
              g.pow(g.pow_base(t), g.scalar_from_u64(s)));
      }
    }
  }

  TEST_CASE("any n-1 shares look independent of s") {
    // With the last share dropped, the product is g^{sum r_i}: for two
    // different secrets the partial products must not reveal which one.
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    Drbg a(seed_from_u64(7)), b(seed_from_u64(7));
    auto s0 = split_secret(g, 5, 4, 8, a);
    auto s1 = split_secret(g, 200, 4, 8, b);
    for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(s0.shares[k] == s1.shares[k]);
    CHECK(s0.shares[3] != s1.shares[3]);
  }

  TEST_CASE("parameter checks") {
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    Drbg rng(seed_from_u64(8));
    CHECK(code_of([&] { split_secret(g, 1, 1, 8, rng); }) == ErrorCode::kParameter);
    CHECK(code_of([&] { split_secret(g, 256, 4, 8, rng); }) == ErrorCode::kParameter);
  }
}

TEST_SUITE("dlog") {
  TEST_CASE("baby-step giant-step agrees with a linear scan below 2^10") {
    for (auto kind : kKinds) {
      const Group& g = group_for(kind);
      Drbg rng(seed_from_u64(9));
      const auto base = g.pow_base(g.random_scalar(rng));
      std::vector<GroupElement> powers;
      GroupElement acc = g.identity();
      for (int s = 0; s < 1024; ++s) {
        powers.push_back(acc);
        acc = g.mul(acc, base);
      }
      DiscreteLogSolver solver(g, base, 1024);
      for (std::uint64_t s = 0; s < 1024; ++s) {
        auto linear = std::find(powers.begin(), powers.end(), powers[s]) - powers.begin();
        auto found = solver.solve(powers[s]);
        REQUIRE(found.has_value());
        CHECK(*found == static_cast<std::uint64_t>(linear));
      }
      CHECK(!solver.solve(acc).has_value());  // base^1024 is out of range
    }
  }

  TEST_CASE("bounds are exclusive and odd bounds work") {
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    for (std::uint64_t bound : {1ull, 2ull, 3ull, 17ull, 1000ull, 1ull << 20}) {
      DiscreteLogSolver solver(g, g.generator(), bound);
      CHECK(solver.solve(g.identity()) == 0u);
      CHECK(solver.solve(g.pow_base(g.scalar_from_u64(bound - 1))) == bound - 1);
      CHECK(!solver.solve(g.pow_base(g.scalar_from_u64(bound))).has_value());
    }
    CHECK(code_of([&] { DiscreteLogSolver(g, g.generator(), 0); }) == ErrorCode::kParameter);
  }

  TEST_CASE("large answers and reuse of the table") {
    const Group& g = group_for(GroupKind::kTestSchnorr61);
    Drbg rng(seed_from_u64(10));
    DiscreteLogSolver solver(g, g.generator(), 1ull << 32);
    for (int k = 0; k < 20; ++k) {
      std::uint64_t s = rng.uniform(1ull << 32);
      CHECK(solver.solve(g.pow_base(g.scalar_from_u64(s))) == s);
    }
    CHECK(solver.table_size() <= 65536);
    CHECK(!solver.solve(g.random_element(rng)).has_value());
  }
}

TEST_SUITE("payload") {
  TEST_CASE("round trip, length and tamper detection") {
    for (auto kind : kKinds) {
      const Group& g = group_for(kind);
      Drbg rng(seed_from_u64(11));
      auto kp = eg_keygen(g, rng);
      for (std::size_t n : {0, 1, 32, 1000}) {
        Bytes msg(n);
        rng.fill(msg);
        Bytes ct = payload_encrypt(g, kp.pub, msg, rng);
        CHECK(ct.size() == g.element_width() + n + 16);
        CHECK(payload_overhead(g) == g.element_width() + 16);
        CHECK(payload_decrypt(g, kp.secret, ct) == msg);
        Bytes bad = ct;
        bad.back() ^= 1;
        CHECK(code_of([&] { payload_decrypt(g, kp.secret, bad); }) == ErrorCode::kDecryption);
      }
      auto other = eg_keygen(g, rng);
      Bytes ct = payload_encrypt(g, kp.pub, Bytes{1, 2, 3}, rng);
      CHECK(code_of([&] { payload_decrypt(g, other.secret, ct); }) == ErrorCode::kDecryption);
    }
  }
}
