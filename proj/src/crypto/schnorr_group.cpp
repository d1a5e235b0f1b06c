#include <sodium.h>

#include "fese/crypto/group.hpp"
#include "fese/error.hpp"

namespace fese {
namespace {

using u128 = unsigned __int128;

// Safe prime p = 2q + 1; the quadratic residues form the order-q subgroup.
constexpr std::uint64_t kP = 4611686018427377339ull;
constexpr std::uint64_t kQ = 2305843009213688669ull;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % mod);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1;
  base %= mod;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

std::uint64_t load_be(ByteView b) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t value(const GroupElement& e) { return load_be(ByteView(e.bytes.data(), 8)); }

GroupElement element(std::uint64_t v) {
  GroupElement e;
  for (int i = 0; i < 8; ++i) e.bytes[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  return e;
}

std::uint64_t scalar_value(const Scalar& s) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | s.bytes[i];
  return v;
}

Scalar scalar(std::uint64_t v) {
  Scalar s;
  for (int i = 0; i < 8; ++i) s.bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return s;
}

class TestSchnorrGroup final : public Group {
 public:
  TestSchnorrGroup() {
    require(sodium_init() >= 0, ErrorCode::kParameter, "libsodium initialisation failed");
    static constexpr std::string_view kLabel = "fese/second-generator/test-schnorr61";
    second_ = hash_to_element("fese/second-generator",
                              ByteView(reinterpret_cast<const std::uint8_t*>(kLabel.data()),
                                       kLabel.size()));
  }

  GroupKind kind() const override { return GroupKind::kTestSchnorr61; }
  std::size_t element_width() const override { return 8; }
  std::size_t scalar_width() const override { return 8; }

  GroupElement identity() const override { return element(1); }
  GroupElement generator() const override { return element(4); }
  GroupElement second_generator() const override { return second_; }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    return element(mulmod(value(a), value(b), kP));
  }
  GroupElement inverse(const GroupElement& a) const override {
    return element(powmod(value(a), kP - 2, kP));
  }
  GroupElement pow(const GroupElement& a, const Scalar& e) const override {
    return element(powmod(value(a), scalar_value(e), kP));
  }
  GroupElement pow_base(const Scalar& e) const override { return pow(generator(), e); }

  bool is_element(ByteView encoded) const override {
    if (encoded.size() != 8) return false;
    std::uint64_t v = load_be(encoded);
    return v >= 1 && v < kP && powmod(v, kQ, kP) == 1;
  }

  GroupElement hash_to_element(std::string_view domain, ByteView data) const override {
    for (std::uint8_t counter = 0;; ++counter) {
      std::array<std::uint8_t, 16> h;
      crypto_generichash_state st;
      crypto_generichash_init(&st, nullptr, 0, h.size());
      crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(domain.data()),
                                domain.size());
      crypto_generichash_update(&st, &counter, 1);
      crypto_generichash_update(&st, data.data(), data.size());
      crypto_generichash_final(&st, h.data(), h.size());
      u128 wide = 0;
      for (auto b : h) wide = (wide << 8) | b;
      auto v = static_cast<std::uint64_t>(wide % kP);
      std::uint64_t sq = mulmod(v, v, kP);
      if (sq > 1) return element(sq);
    }
  }

  Scalar scalar_from_u64(std::uint64_t v) const override { return scalar(v % kQ); }

  Scalar scalar_from_wide(ByteView bytes64) const override {
    require(bytes64.size() == 64, ErrorCode::kParameter, "wide scalar reduction needs 64 bytes");
    u128 acc = 0;
    for (auto b : bytes64) acc = ((acc << 8) | b) % kQ;
    return scalar(static_cast<std::uint64_t>(acc));
  }

  Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
    return scalar(static_cast<std::uint64_t>((static_cast<u128>(scalar_value(a)) + scalar_value(b)) % kQ));
  }
  Scalar scalar_neg(const Scalar& a) const override {
    std::uint64_t v = scalar_value(a);
    return scalar(v == 0 ? 0 : kQ - v);
  }
  Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
    return scalar(mulmod(scalar_value(a), scalar_value(b), kQ));
  }
  bool is_canonical_scalar(ByteView bytes) const override {
    if (bytes.size() != 8) return false;
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    return v < kQ;
  }

 private:
  GroupElement second_;
};

}  // namespace

const Group& test_schnorr_group() {
  static const TestSchnorrGroup group;
  return group;
}

}  // namespace fese
