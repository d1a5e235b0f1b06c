#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace fese {

using Seed = std::array<std::uint8_t, 32>;

Seed parse_seed(std::string_view hex);
Seed seed_from_u64(std::uint64_t v);

/// Deterministic random bit generator: ChaCha20 keystream keyed by a 32-byte
/// seed. Satisfies UniformRandomBitGenerator. Not thread-safe; every owner
/// holds its own instance and derives children with fork().
class Drbg {
 public:
  using result_type = std::uint64_t;

  explicit Drbg(const Seed& seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  /// Uniform in [0, bound) without modulo bias. bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

  /// Independent generator derived from this one's seed and a label. Does not
  /// advance this generator's stream.
  Drbg fork(std::string_view label) const;

  const Seed& seed() const { return seed_; }

 private:
  void refill();

  Seed seed_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint8_t, 256> buffer_{};
  std::size_t buffer_pos_ = 256;
};

}  // namespace fese
