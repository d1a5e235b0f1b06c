#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "fese/bytes.hpp"
#include "fese/random.hpp"

namespace fese {

/// A point of {0,1}^N. Bits are packed most-significant-bit first within each
/// byte; the trailing pad bits of the last byte are always zero.
class BinaryTemplate {
 public:
  BinaryTemplate() = default;
  /// All-zero template of n bits. Throws kDimension for n == 0.
  explicit BinaryTemplate(std::size_t n_bits);

  static BinaryTemplate from_packed(std::size_t n_bits, ByteView packed);
  /// Parses a string of '0'/'1' characters, first character is bit 0.
  static BinaryTemplate from_string(std::string_view bits);

  std::size_t size() const { return n_bits_; }
  bool bit(std::size_t i) const {
    return (packed_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { packed_[i >> 3] ^= static_cast<std::uint8_t>(0x80u >> (i & 7)); }

  std::size_t weight() const;
  BinaryTemplate complement() const;
  const Bytes& packed() const { return packed_; }
  std::string to_string() const;

  friend bool operator==(const BinaryTemplate&, const BinaryTemplate&) = default;

 private:
  std::size_t n_bits_ = 0;
  Bytes packed_;
};

struct MatchThresholds {
  std::uint32_t lambda_min = 0;
  std::uint32_t lambda_max = 0;

  /// Throws kParameter unless 0 <= lambda_min < lambda_max <= n_bits.
  void validate(std::size_t n_bits) const;
};

/// Number of positions where a and b differ. Throws kDimension on length
/// mismatch.
std::size_t hamming_distance(const BinaryTemplate& a, const BinaryTemplate& b);

BinaryTemplate random_template(std::size_t n_bits, Drbg& rng);

/// Passes t through a binary symmetric channel: each bit flips independently
/// with probability flip_prob.
BinaryTemplate perturb_bsc(const BinaryTemplate& t, double flip_prob, Drbg& rng);

/// Flips exactly `distance` distinct positions chosen uniformly.
BinaryTemplate perturb_exact(const BinaryTemplate& t, std::size_t distance, Drbg& rng);

// Template file: "FTPL", u32 N (big-endian), ceil(N/8) packed bytes.
Bytes encode_template_file(const BinaryTemplate& t);
BinaryTemplate decode_template_file(ByteView data);

}  // namespace fese
