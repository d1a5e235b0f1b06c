#include "fese/templates.hpp"

#include <bit>
#include <numeric>
#include <vector>

#include "fese/error.hpp"

namespace fese {

namespace {

std::uint8_t tail_mask(std::size_t n_bits) {
  std::size_t used = n_bits & 7;
  return used == 0 ? 0xff : static_cast<std::uint8_t>(0xff << (8 - used));
}

}  // namespace

BinaryTemplate::BinaryTemplate(std::size_t n_bits)
    : n_bits_(n_bits), packed_((n_bits + 7) / 8, 0) {
  require(n_bits > 0, ErrorCode::kDimension, "template dimension must be positive");
}

BinaryTemplate BinaryTemplate::from_packed(std::size_t n_bits, ByteView packed) {
  BinaryTemplate t(n_bits);
  require(packed.size() == t.packed_.size(), ErrorCode::kDimension,
          "packed length " + std::to_string(packed.size()) + " does not match N=" +
              std::to_string(n_bits));
  require((packed.back() & ~tail_mask(n_bits)) == 0, ErrorCode::kFormat,
          "non-zero pad bits in packed template");
  t.packed_.assign(packed.begin(), packed.end());
  return t;
}

BinaryTemplate BinaryTemplate::from_string(std::string_view bits) {
  BinaryTemplate t(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    require(bits[i] == '0' || bits[i] == '1', ErrorCode::kFormat,
            "template string must contain only 0 and 1");
    t.set(i, bits[i] == '1');
  }
  return t;
}

void BinaryTemplate::set(std::size_t i, bool value) {
  auto mask = static_cast<std::uint8_t>(0x80u >> (i & 7));
  if (value) {
    packed_[i >> 3] |= mask;
  } else {
    packed_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }
}

std::size_t BinaryTemplate::weight() const {
  std::size_t w = 0;
  for (auto b : packed_) w += static_cast<std::size_t>(std::popcount(b));
  return w;
}

BinaryTemplate BinaryTemplate::complement() const {
  BinaryTemplate out = *this;
  for (auto& b : out.packed_) b = static_cast<std::uint8_t>(~b);
  out.packed_.back() &= tail_mask(n_bits_);
  return out;
}

std::string BinaryTemplate::to_string() const {
  std::string s(n_bits_, '0');
  for (std::size_t i = 0; i < n_bits_; ++i) {
    if (bit(i)) s[i] = '1';
  }
  return s;
}

void MatchThresholds::validate(std::size_t n_bits) const {
  require(lambda_min < lambda_max && lambda_max <= n_bits, ErrorCode::kParameter,
          "thresholds must satisfy 0 <= lambda_min < lambda_max <= N");
}

std::size_t hamming_distance(const BinaryTemplate& a, const BinaryTemplate& b) {
  require(a.size() == b.size(), ErrorCode::kDimension,
          "template length mismatch: " + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()));
  std::size_t d = 0;
  const auto& pa = a.packed();
  const auto& pb = b.packed();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    d += static_cast<std::size_t>(std::popcount(static_cast<std::uint8_t>(pa[i] ^ pb[i])));
  }
  return d;
}

BinaryTemplate random_template(std::size_t n_bits, Drbg& rng) {
  require(n_bits > 0, ErrorCode::kDimension, "template dimension must be positive");
  Bytes packed((n_bits + 7) / 8);
  rng.fill(packed);
  packed.back() &= tail_mask(n_bits);
  return BinaryTemplate::from_packed(n_bits, packed);
}

BinaryTemplate perturb_bsc(const BinaryTemplate& t, double flip_prob, Drbg& rng) {
  require(flip_prob >= 0.0 && flip_prob <= 1.0, ErrorCode::kParameter,
          "flip probability must lie in [0, 1]");
  BinaryTemplate out = t;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (rng.bernoulli(flip_prob)) out.flip(i);
  }
  return out;
}

BinaryTemplate perturb_exact(const BinaryTemplate& t, std::size_t distance, Drbg& rng) {
  require(distance <= t.size(), ErrorCode::kParameter, "distance exceeds dimension");
  std::vector<std::size_t> idx(t.size());
  std::iota(idx.begin(), idx.end(), 0);
  BinaryTemplate out = t;
  for (std::size_t k = 0; k < distance; ++k) {
    std::size_t j = k + static_cast<std::size_t>(rng.uniform(idx.size() - k));
    std::swap(idx[k], idx[j]);
    out.flip(idx[k]);
  }
  return out;
}

Bytes encode_template_file(const BinaryTemplate& t) {
  ByteWriter w;
  w.raw(std::string_view("FTPL"));
  w.u32(static_cast<std::uint32_t>(t.size()));
  w.raw(t.packed());
  return std::move(w).take();
}

BinaryTemplate decode_template_file(ByteView data) {
  ByteReader r(data);
  r.expect_magic("FTPL");
  std::uint32_t n = r.u32();
  require(n > 0, ErrorCode::kDimension, "template file declares N = 0");
  auto packed = r.raw((static_cast<std::size_t>(n) + 7) / 8);
  r.expect_end();
  return BinaryTemplate::from_packed(n, packed);
}

}  // namespace fese
