#include "fese/lsh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fese/error.hpp"

namespace fese {

LshFamily LshFamily::build(std::size_t n_bits, std::size_t t, std::size_t mu, Drbg& rng) {
  require(n_bits >= 1 && n_bits <= 65536, ErrorCode::kParameter,
          "LSH input dimension must lie in [1, 65536]");
  require(t >= 1 && t <= n_bits && t <= 65535, ErrorCode::kParameter,
          "LSH output width t must satisfy 1 <= t <= min(N, 65535)");
  require(mu >= 1 && mu <= 65535, ErrorCode::kParameter, "LSH family needs 1..65535 functions");

  std::vector<std::uint16_t> deck(n_bits);
  std::iota(deck.begin(), deck.end(), 0);
  std::size_t next = n_bits;
  auto reshuffle = [&] {
    for (std::size_t k = n_bits - 1; k > 0; --k) {
      std::swap(deck[k], deck[rng.uniform(k + 1)]);
    }
    next = 0;
  };

  std::vector<std::vector<std::uint16_t>> positions(mu);
  std::vector<bool> taken(n_bits);
  for (auto& fn : positions) {
    fn.reserve(t);
    while (fn.size() < t) {
      if (next == n_bits) reshuffle();
      std::uint16_t p = deck[next++];
      if (taken[p]) continue;
      taken[p] = true;
      fn.push_back(p);
    }
    for (auto p : fn) taken[p] = false;
  }
  return from_positions(n_bits, std::move(positions));
}

LshFamily LshFamily::from_positions(std::size_t n_bits,
                                    std::vector<std::vector<std::uint16_t>> positions) {
  require(!positions.empty(), ErrorCode::kParameter, "LSH family needs at least one function");
  const std::size_t t = positions.front().size();
  require(t >= 1 && t <= n_bits, ErrorCode::kParameter,
          "LSH output width t must satisfy 1 <= t <= N");
  for (const auto& fn : positions) {
    require(fn.size() == t, ErrorCode::kParameter, "LSH functions differ in width");
    std::vector<std::uint16_t> sorted = fn;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            ErrorCode::kParameter, "LSH function samples a position twice");
    require(sorted.back() < n_bits, ErrorCode::kParameter, "LSH position out of range");
  }
  LshFamily f;
  f.n_bits_ = n_bits;
  f.t_ = t;
  f.positions_ = std::move(positions);
  return f;
}

const std::vector<std::uint16_t>& LshFamily::positions(std::size_t i) const {
  require(i < positions_.size(), ErrorCode::kParameter,
          "LSH function index " + std::to_string(i) + " out of range");
  return positions_[i];
}

LshDigest LshFamily::eval(std::size_t i, const BinaryTemplate& x) const {
  const auto& pos = positions(i);
  require(x.size() == n_bits_, ErrorCode::kDimension,
          "template has " + std::to_string(x.size()) + " bits, family expects " +
              std::to_string(n_bits_));
  LshDigest out((t_ + 7) / 8, 0);
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (x.bit(pos[k])) out[k >> 3] |= static_cast<std::uint8_t>(0x80u >> (k & 7));
  }
  return out;
}

void LshFamily::serialize(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(n_bits_));
  w.u16(static_cast<std::uint16_t>(t_));
  w.u16(static_cast<std::uint16_t>(positions_.size()));
  for (const auto& fn : positions_) {
    for (auto p : fn) w.u16(p);
  }
}

LshFamily LshFamily::deserialize(ByteReader& r) {
  std::size_t n = r.u32();
  std::size_t t = r.u16();
  std::size_t mu = r.u16();
  require(mu >= 1 && t >= 1, ErrorCode::kFormat, "empty LSH descriptor");
  std::vector<std::vector<std::uint16_t>> positions(mu, std::vector<std::uint16_t>(t));
  for (auto& fn : positions) {
    for (auto& p : fn) p = r.u16();
  }
  return from_positions(n, std::move(positions));
}

void LshParams::validate() const {
  require(r1 < r2, ErrorCode::kParameter, "LSH parameters need r1 < r2");
  require(p1 <= 1.0 && p1 > p2 && p2 >= 0.0, ErrorCode::kParameter,
          "LSH parameters need 1 >= p1 > p2 >= 0");
}

double analytic_collision_prob(double r, std::size_t n_bits, std::size_t t) {
  require(n_bits > 0 && r >= 0.0 && r <= static_cast<double>(n_bits), ErrorCode::kParameter,
          "distance must lie in [0, N]");
  return std::pow(1.0 - r / static_cast<double>(n_bits), static_cast<double>(t));
}

EpsEstimate estimate_eps(const LshFamily& family, std::size_t lambda_min,
                         std::size_t lambda_max, std::size_t trials, Drbg& rng) {
  require(trials >= 1, ErrorCode::kParameter, "estimate_eps needs at least one trial");
  require(lambda_min <= lambda_max && lambda_max <= family.n_bits(), ErrorCode::kParameter,
          "estimate_eps needs lambda_min <= lambda_max <= N");
  std::size_t close_miss = 0;
  std::size_t far_hit = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    auto x = random_template(family.n_bits(), rng);
    auto close = perturb_exact(x, lambda_min, rng);
    auto far = perturb_exact(x, lambda_max, rng);
    for (std::size_t i = 0; i < family.mu(); ++i) {
      auto hx = family.eval(i, x);
      if (family.eval(i, close) != hx) ++close_miss;
      if (family.eval(i, far) == hx) ++far_hit;
    }
  }
  const double total = static_cast<double>(trials * family.mu());
  return {static_cast<double>(close_miss) / total, static_cast<double>(far_hit) / total};
}

}  // namespace fese
