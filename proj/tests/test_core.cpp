#include <sodium.h>

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "fese/bloom.hpp"
#include "fese/error.hpp"
#include "fese/lsh.hpp"
#include "fese/random.hpp"
#include "fese/templates.hpp"
#include "oracles.hpp"

using namespace fese;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kProtocol;
}

std::size_t naive_distance(const BinaryTemplate& a, const BinaryTemplate& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a.bit(i) != b.bit(i);
  return d;
}

}  // namespace

TEST_SUITE("templates") {
  TEST_CASE("packing is msb first with zero padding") {
    auto x = BinaryTemplate::from_string("1000000001");
    CHECK(x.size() == 10);
    CHECK(x.packed() == Bytes{0x80, 0x40});
    CHECK(x.to_string() == "1000000001");
    CHECK(x.weight() == 2);
    CHECK(x.complement().to_string() == "0111111110");
  }

  TEST_CASE("from_packed rejects dirty pad bits and wrong length") {
    CHECK(code_of([] { BinaryTemplate::from_packed(10, Bytes{0x80, 0x41}); }) ==
          ErrorCode::kFormat);
    CHECK(code_of([] { BinaryTemplate::from_packed(10, Bytes{0x80}); }) == ErrorCode::kDimension);
    CHECK(code_of([] { BinaryTemplate::from_string("01x"); }) == ErrorCode::kFormat);
    CHECK(code_of([] { BinaryTemplate(0); }) == ErrorCode::kDimension);
  }

  TEST_CASE("hamming distance agrees with a bitwise count") {
    Drbg rng(seed_from_u64(1));
    for (std::size_t n : {1, 7, 8, 9, 63, 256, 1000}) {
      for (int k = 0; k < 20; ++k) {
        auto a = random_template(n, rng);
        auto b = random_template(n, rng);
        CHECK(hamming_distance(a, b) == naive_distance(a, b));
        CHECK(hamming_distance(a, a) == 0);
        CHECK(hamming_distance(a, a.complement()) == n);
      }
    }
    CHECK(code_of([] { hamming_distance(BinaryTemplate(8), BinaryTemplate(9)); }) ==
          ErrorCode::kDimension);
  }

  TEST_CASE("perturb_exact flips exactly the requested number of bits") {
    Drbg rng(seed_from_u64(2));
    auto x = random_template(256, rng);
    for (std::size_t d : {0, 1, 26, 77, 128, 256}) CHECK(hamming_distance(x, perturb_exact(x, d, rng)) == d);
    CHECK(code_of([&] { perturb_exact(x, 257, rng); }) == ErrorCode::kParameter);
  }

  TEST_CASE("perturb_bsc flip count follows the binomial law") {
    Drbg rng(seed_from_u64(3));
    auto x = random_template(256, rng);
    const int trials = 4000;
    const double p = 0.05;
    double total = 0;
    for (int k = 0; k < trials; ++k) total += hamming_distance(x, perturb_bsc(x, p, rng));
    const double n = 256.0 * trials;
    CHECK(std::abs(total - n * p) < 5 * oracle::binomial_sd(n, p));
    CHECK(perturb_bsc(x, 0.0, rng) == x);
    CHECK(perturb_bsc(x, 1.0, rng) == x.complement());
    CHECK(code_of([&] { perturb_bsc(x, 1.5, rng); }) == ErrorCode::kParameter);
    CHECK(code_of([&] { perturb_bsc(x, -0.1, rng); }) == ErrorCode::kParameter);
  }

  TEST_CASE("template file round trip") {
    Drbg rng(seed_from_u64(4));
    auto x = random_template(300, rng);
    Bytes file = encode_template_file(x);
    CHECK(Bytes(file.begin(), file.begin() + 4) == Bytes{'F', 'T', 'P', 'L'});
    CHECK(decode_template_file(file) == x);
    file.pop_back();
    CHECK(code_of([&] { decode_template_file(file); }) == ErrorCode::kFormat);
  }

  TEST_CASE("thresholds validate ordering") {
    CHECK_NOTHROW(MatchThresholds{26, 77}.validate(256));
    CHECK(code_of([] { MatchThresholds{77, 26}.validate(256); }) == ErrorCode::kParameter);
    CHECK(code_of([] { MatchThresholds{26, 300}.validate(256); }) == ErrorCode::kParameter);
  }
}

TEST_SUITE("drbg") {
  TEST_CASE("same seed gives the same stream, forks differ") {
    Drbg a(seed_from_u64(9)), b(seed_from_u64(9));
    for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
    Drbg f1 = a.fork("x"), f2 = a.fork("y"), f3 = a.fork("x");
    CHECK(f1.seed() == f3.seed());
    CHECK(f1.seed() != f2.seed());
    CHECK(f1.next_u64() != f2.next_u64());
  }

  TEST_CASE("seed parsing") {
    Seed s = parse_seed(std::string(64, 'a'));
    CHECK(s[0] == 0xaa);
    CHECK(code_of([] { parse_seed("abcd"); }) == ErrorCode::kParameter);
  }

  TEST_CASE("uniform passes a chi-square test") {
    Drbg rng(seed_from_u64(10));
    const std::size_t bins = 37, draws = 370000;
    std::vector<double> counts(bins, 0);
    for (std::size_t k = 0; k < draws; ++k) counts[rng.uniform(bins)] += 1;
    double chi = 0, expected = double(draws) / bins;
    for (double c : counts) chi += (c - expected) * (c - expected) / expected;
    CHECK(chi < oracle::chi_square_critical(bins - 1));
    double mean = 0;
    for (int k = 0; k < 100000; ++k) mean += rng.uniform01();
    CHECK(std::abs(mean / 100000 - 0.5) < 0.005);
  }
}

TEST_SUITE("lsh") {
  TEST_CASE("functions are distinct t-subsets, disjoint while the deck lasts") {
    Drbg rng(seed_from_u64(11));
    auto fam = LshFamily::build(256, 8, 8, rng);
    std::set<std::uint16_t> all;
    for (std::size_t i = 0; i < fam.mu(); ++i) {
      const auto& p = fam.positions(i);
      CHECK(p.size() == 8);
      CHECK(std::set<std::uint16_t>(p.begin(), p.end()).size() == 8);
      all.insert(p.begin(), p.end());
    }
    CHECK(all.size() == 64);

    auto big = LshFamily::build(64, 10, 20, rng);
    for (std::size_t i = 0; i < big.mu(); ++i) {
      const auto& p = big.positions(i);
      CHECK(std::set<std::uint16_t>(p.begin(), p.end()).size() == 10);
      CHECK(*std::max_element(p.begin(), p.end()) < 64);
    }
  }

  TEST_CASE("eval is the projection onto the sampled positions") {
    Drbg rng(seed_from_u64(12));
    auto fam = LshFamily::build(100, 12, 5, rng);
    for (int k = 0; k < 50; ++k) {
      auto x = random_template(100, rng);
      for (std::size_t i = 0; i < fam.mu(); ++i) {
        std::string expect;
        for (auto pos : fam.positions(i)) expect += x.bit(pos) ? '1' : '0';
        CHECK(BinaryTemplate::from_packed(12, fam.eval(i, x)).to_string() == expect);
      }
    }
    CHECK(code_of([&] { fam.eval(5, BinaryTemplate(100)); }) == ErrorCode::kParameter);
    CHECK(code_of([&] { fam.eval(0, BinaryTemplate(99)); }) == ErrorCode::kDimension);
  }

  TEST_CASE("descriptor round trip and from_positions validation") {
    Drbg rng(seed_from_u64(13));
    auto fam = LshFamily::build(256, 8, 8, rng);
    ByteWriter w;
    fam.serialize(w);
    Bytes b = std::move(w).take();
    ByteReader r(b);
    CHECK(LshFamily::deserialize(r) == fam);
    CHECK(code_of([] { LshFamily::from_positions(8, {{1, 1}}); }) == ErrorCode::kParameter);
    CHECK(code_of([] { LshFamily::from_positions(8, {{1, 8}}); }) == ErrorCode::kParameter);
    CHECK(code_of([] { LshFamily::from_positions(8, {{1, 2}, {3}}); }) == ErrorCode::kParameter);
    CHECK(code_of([&] { LshFamily::build(8, 9, 1, rng); }) == ErrorCode::kParameter);
  }

  TEST_CASE("collision rate under exact distance matches (1 - r/N)^t") {
    // A uniform t-subset misses all r flipped positions with probability
    // C(N-r, t) / C(N, t); the BSC figure (1 - r/N)^t is its
    // with-replacement approximation.
    Drbg rng(seed_from_u64(14));
    const std::size_t n = 256, t = 8, r = 26, trials = 4000;
    auto fam = LshFamily::build(n, t, 8, rng);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < trials; ++k) {
      auto x = random_template(n, rng);
      auto y = perturb_exact(x, r, rng);
      for (std::size_t i = 0; i < fam.mu(); ++i) hits += fam.eval(i, x) == fam.eval(i, y);
    }
    double exact = 1;
    for (std::size_t k = 0; k < t; ++k) exact *= double(n - r - k) / double(n - k);
    const double total = double(trials * fam.mu());
    // Functions within one trial are correlated, so allow a wide margin.
    CHECK(std::abs(hits / total - exact) < 0.03);
    CHECK(analytic_collision_prob(r, n, t) == doctest::Approx(std::pow(1 - 26.0 / 256, 8)));
  }

  TEST_CASE("estimate_eps is close to the hypergeometric values") {
    Drbg rng(seed_from_u64(15));
    auto fam = LshFamily::build(256, 8, 8, rng);
    auto e = estimate_eps(fam, 26, 77, 3000, rng);
    auto miss_prob = [](double n, double r, int t) {
      double p = 1;
      for (int k = 0; k < t; ++k) p *= (n - r - k) / (n - k);
      return p;
    };
    CHECK(e.eps1 == doctest::Approx(1 - miss_prob(256, 26, 8)).epsilon(0.1));
    CHECK(e.eps2 == doctest::Approx(miss_prob(256, 77, 8)).epsilon(0.15));
  }

  TEST_CASE("LshParams validation") {
    CHECK_NOTHROW(LshParams{26, 77, 0.4, 0.05}.validate());
    CHECK(code_of([] { LshParams{77, 26, 0.4, 0.05}.validate(); }) == ErrorCode::kParameter);
    CHECK(code_of([] { LshParams{26, 77, 0.05, 0.4}.validate(); }) == ErrorCode::kParameter);
    CHECK(LshParams{26, 77, 0.4, 0.05}.eps1() == doctest::Approx(0.6));
  }
}

TEST_SUITE("bloom") {
  TEST_CASE("hash is keyed BLAKE2b over u16 j || y reduced mod m") {
    HashKey key{};
    for (std::size_t k = 0; k < key.size(); ++k) key[k] = static_cast<std::uint8_t>(k);
    BloomHasher h(key, 3, 1000);
    Bytes y = {1, 2, 3, 4, 5};
    for (std::size_t j = 0; j < 3; ++j) {
      Bytes in = {static_cast<std::uint8_t>(j >> 8), static_cast<std::uint8_t>(j)};
      in.insert(in.end(), y.begin(), y.end());
      std::uint8_t out[8];
      crypto_generichash(out, 8, in.data(), in.size(), key.data(), key.size());
      std::uint64_t v = 0;
      for (auto b : out) v = (v << 8) | b;
      CHECK(h.hash(j, y) == v % 1000);
    }
    CHECK(code_of([&] { h.hash(3, y); }) == ErrorCode::kParameter);
    Bytes fp = h.key_fingerprint();
    CHECK(fp.size() == 16);
    CHECK(std::search(fp.begin(), fp.end(), key.begin(), key.begin() + 8) == fp.end());
  }

  TEST_CASE("composite index is h'_j(h_i(x) || u16 i), ordered i*nu + j") {
    Drbg rng(seed_from_u64(20));
    auto fam = LshFamily::build(64, 6, 3, rng);
    HashKey key{};
    rng.fill(key);
    BloomHasher bloom(key, 2, 97);
    CompositeFamily comp(fam, bloom);
    auto x = random_template(64, rng);
    auto all = comp.eval_all(x);
    REQUIRE(all.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
      Bytes y = fam.eval(i, x);
      y.push_back(0);
      y.push_back(static_cast<std::uint8_t>(i));
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(all[i * 2 + j] == bloom.hash(j, y));
        CHECK(comp.eval(j, i, x) == all[i * 2 + j]);
      }
    }
  }

  TEST_CASE("worked insertion example with three elements") {
    // Buckets T_1, T_2, T_3, T_alpha, T_m map to 0, 1, 2, 5, 9 with m = 10.
    BfsStructure bfs(10);
    const Tag y1{1}, y2{2}, y3{3};
    bfs.add(std::vector<BucketIndex>{1, 2, 5}, y1);
    bfs.add(std::vector<BucketIndex>{0, 1, 2}, y2);
    CHECK(bfs.bucket(0) == std::vector<Tag>{y2});
    CHECK(bfs.bucket(1) == std::vector<Tag>{y1, y2});
    CHECK(bfs.bucket(5) == std::vector<Tag>{y1});
    const std::vector<BucketIndex> idx3 = {5, 1, 9};
    bfs.add(idx3, y3);
    CHECK(bfs.bucket(5) == std::vector<Tag>{y1, y3});
    CHECK(bfs.bucket(1) == std::vector<Tag>{y1, y2, y3});
    CHECK(bfs.bucket(9) == std::vector<Tag>{y3});
    CHECK(bfs.lookup(idx3, 3, 3) == std::vector<Tag>{y3});
  }

  TEST_CASE("lookup equals a brute-force intersection on small structures") {
    Drbg rng(seed_from_u64(21));
    for (int round = 0; round < 30; ++round) {
      const std::size_t n = 12, mu = 3, nu = 2, m = 16 + rng.uniform(17);
      auto fam = LshFamily::build(n, 3, mu, rng);
      HashKey key{};
      rng.fill(key);
      CompositeFamily comp(fam, BloomHasher(key, nu, m));
      BfsStructure bfs(m);
      std::vector<std::set<std::uint64_t>> ref(m);
      for (std::uint64_t v = 0; v < 8; ++v) {
        auto x = random_template(n, rng);
        for (auto a : comp.eval_all(x)) ref[a].insert(v);
        bfs.add(comp, x, Tag{v});
      }
      for (int q = 0; q < 10; ++q) {
        auto x = random_template(n, rng);
        auto idx = comp.eval_all(x);
        std::vector<std::uint32_t> idx32(idx.begin(), idx.end());
        auto expect = oracle::intersect_all(ref, idx32);
        std::set<std::uint64_t> got;
        for (auto t : bfs.lookup(comp, x, mu * nu)) got.insert(t.value);
        CHECK(got == expect);

        // grouped threshold: a tag counts if all nu buckets of enough groups hold it
        for (std::size_t tau : {1, 2, 3, 4, 5, 6}) {
          std::set<std::uint64_t> want;
          for (std::uint64_t v = 0; v < 8; ++v) {
            std::size_t groups = 0;
            for (std::size_t i = 0; i < mu; ++i) {
              bool all = true;
              for (std::size_t j = 0; j < nu; ++j) all = all && ref[idx[i * nu + j]].count(v);
              groups += all;
            }
            if (groups >= (tau + nu - 1) / nu) want.insert(v);
          }
          std::set<std::uint64_t> have;
          for (auto t : bfs.lookup(idx, nu, tau)) have.insert(t.value);
          CHECK(have == want);
        }
      }
    }
  }

  TEST_CASE("capacity overflow names the bucket and leaves the structure unchanged") {
    BfsStructure bfs(4, 2);
    bfs.add(std::vector<BucketIndex>{0, 1}, Tag{1});
    bfs.add(std::vector<BucketIndex>{0, 2}, Tag{2});
    BfsStructure before = bfs;
    try {
      bfs.add(std::vector<BucketIndex>{3, 0}, Tag{3});
      FAIL("expected overflow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOverflow);
      CHECK(std::string(e.what()).find("bucket 0") != std::string::npos);
    }
    CHECK(bfs == before);
  }

  TEST_CASE("false-positive formula and its inputs") {
    CHECK(fp_probability(3, 100, 3) == doctest::Approx(6.659e-4).epsilon(0.001));
    CHECK(fp_probability(1, 10, 0) == 0.0);
    auto b = index_bounds(0.1, 0.05, 4096, 32);
    CHECK(b.soundness == doctest::Approx(std::pow(0.05 + 0.95 / 4096, 32)));
    CHECK(b.completeness_failure == doctest::Approx(1 - std::pow(0.9, 32)));
    CHECK(required_groups(24, 4) == 6);
    CHECK(required_groups(9, 4) == 3);
  }

  TEST_CASE("contains is plain Bloom membership") {
    BfsStructure bfs(8);
    bfs.add(std::vector<BucketIndex>{1, 2}, Tag{7});
    CHECK(bfs.contains(std::vector<BucketIndex>{1, 2}));
    CHECK(!bfs.contains(std::vector<BucketIndex>{1, 3}));
  }
}
