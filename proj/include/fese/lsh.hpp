#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fese/bytes.hpp"
#include "fese/random.hpp"
#include "fese/templates.hpp"

namespace fese {

/// t-bit digest of one LSH function, packed MSB-first like BinaryTemplate.
using LshDigest = Bytes;

/// A family of mu bit-sampling hash functions {0,1}^N -> {0,1}^t. Function i
/// projects its input onto t distinct positions.
///
/// Positions are dealt from a shuffled deck of all N indices, so functions
/// are disjoint whenever mu*t <= N; once the deck runs out it is reshuffled
/// and later functions may overlap earlier ones. Each function on its own is
/// a uniform t-subset of [0, N).
class LshFamily {
 public:
  LshFamily() = default;

  /// Throws kParameter unless 1 <= t <= N <= 65536 and mu >= 1.
  static LshFamily build(std::size_t n_bits, std::size_t t, std::size_t mu, Drbg& rng);
  /// Adopts explicit positions (0-based). Validates distinctness and range.
  static LshFamily from_positions(std::size_t n_bits,
                                  std::vector<std::vector<std::uint16_t>> positions);

  std::size_t n_bits() const { return n_bits_; }
  std::size_t t() const { return t_; }
  std::size_t mu() const { return positions_.size(); }
  const std::vector<std::uint16_t>& positions(std::size_t i) const;

  /// Digest of x under function i (0-based). Throws kParameter for i >= mu
  /// and kDimension when x is not N bits long.
  LshDigest eval(std::size_t i, const BinaryTemplate& x) const;

  // Descriptor: u32 N, u16 t, u16 mu, then mu*t big-endian u16 positions.
  void serialize(ByteWriter& w) const;
  static LshFamily deserialize(ByteReader& r);

  friend bool operator==(const LshFamily&, const LshFamily&) = default;

 private:
  std::size_t n_bits_ = 0;
  std::size_t t_ = 0;
  std::vector<std::vector<std::uint16_t>> positions_;
};

/// (r1, r2, p1, p2) of an LSH family: pairs within r1 collide with probability
/// at least p1, pairs beyond r2 with probability at most p2.
struct LshParams {
  double r1 = 0;
  double r2 = 0;
  double p1 = 1;
  double p2 = 0;

  void validate() const;
  /// Mismatch probability for close pairs, 1 - p1.
  double eps1() const { return 1.0 - p1; }
  double eps2() const { return p2; }
};

/// Per-function collision probability (1 - r/N)^t of two templates that are
/// r bits apart under the binary-symmetric-channel model.
double analytic_collision_prob(double r, std::size_t n_bits, std::size_t t);

struct EpsEstimate {
  double eps1 = 0;  ///< empirical Pr[h(x) != h(x')] at distance lambda_min
  double eps2 = 0;  ///< empirical Pr[h(x) == h(x')] at distance lambda_max
};

/// Monte-Carlo estimate of (eps1, eps2) for `family`. Each trial draws a fresh
/// random x, a partner at exactly lambda_min (the worst close pair, since
/// collision probability decreases with distance) and one at exactly
/// lambda_max, and evaluates every function of the family on both pairs.
EpsEstimate estimate_eps(const LshFamily& family, std::size_t lambda_min,
                         std::size_t lambda_max, std::size_t trials, Drbg& rng);

}  // namespace fese
