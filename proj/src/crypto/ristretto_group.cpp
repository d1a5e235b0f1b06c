#include <sodium.h>

#include <cstring>

#include "fese/crypto/group.hpp"
#include "fese/error.hpp"

namespace fese {
namespace {

class Ristretto255Group final : public Group {
 public:
  Ristretto255Group() {
    require(sodium_init() >= 0, ErrorCode::kParameter, "libsodium initialisation failed");
    Scalar one = scalar_from_u64(1);
    generator_ = pow_base(one);
    static constexpr std::string_view kLabel = "fese/second-generator/ristretto255";
    second_ = hash_to_element("fese/second-generator",
                              ByteView(reinterpret_cast<const std::uint8_t*>(kLabel.data()),
                                       kLabel.size()));
  }

  GroupKind kind() const override { return GroupKind::kRistretto255; }
  std::size_t element_width() const override { return crypto_core_ristretto255_BYTES; }
  std::size_t scalar_width() const override { return crypto_core_ristretto255_SCALARBYTES; }

  GroupElement identity() const override { return GroupElement{}; }
  GroupElement generator() const override { return generator_; }
  GroupElement second_generator() const override { return second_; }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    GroupElement out;
    if (crypto_core_ristretto255_add(out.bytes.data(), a.bytes.data(), b.bytes.data()) != 0) {
      fail(ErrorCode::kEncoding, "ristretto255 addition on invalid point");
    }
    return out;
  }

  GroupElement inverse(const GroupElement& a) const override {
    GroupElement out;
    GroupElement zero;
    if (crypto_core_ristretto255_sub(out.bytes.data(), zero.bytes.data(), a.bytes.data()) != 0) {
      fail(ErrorCode::kEncoding, "ristretto255 negation of invalid point");
    }
    return out;
  }

  // libsodium reports an identity result as failure; the identity is a
  // legitimate answer here (zero exponent or identity base).
  GroupElement pow(const GroupElement& a, const Scalar& e) const override {
    GroupElement out;
    if (crypto_scalarmult_ristretto255(out.bytes.data(), e.bytes.data(), a.bytes.data()) != 0) {
      return GroupElement{};
    }
    return out;
  }

  GroupElement pow_base(const Scalar& e) const override {
    GroupElement out;
    if (crypto_scalarmult_ristretto255_base(out.bytes.data(), e.bytes.data()) != 0) {
      return GroupElement{};
    }
    return out;
  }

  bool is_element(ByteView encoded) const override {
    return encoded.size() == element_width() &&
           crypto_core_ristretto255_is_valid_point(encoded.data()) == 1;
  }

  GroupElement hash_to_element(std::string_view domain, ByteView data) const override {
    std::array<std::uint8_t, crypto_core_ristretto255_HASHBYTES> h;
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, h.size());
    crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(domain.data()),
                              domain.size());
    const std::uint8_t sep = 0;
    crypto_generichash_update(&st, &sep, 1);
    crypto_generichash_update(&st, data.data(), data.size());
    crypto_generichash_final(&st, h.data(), h.size());
    GroupElement out;
    crypto_core_ristretto255_from_hash(out.bytes.data(), h.data());
    return out;
  }

  Scalar scalar_from_u64(std::uint64_t v) const override {
    Scalar s;
    for (int i = 0; i < 8; ++i) s.bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return s;
  }

  Scalar scalar_from_wide(ByteView bytes64) const override {
    require(bytes64.size() == crypto_core_ristretto255_NONREDUCEDSCALARBYTES,
            ErrorCode::kParameter, "wide scalar reduction needs 64 bytes");
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.bytes.data(), bytes64.data());
    return s;
  }

  Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
    Scalar s;
    crypto_core_ristretto255_scalar_add(s.bytes.data(), a.bytes.data(), b.bytes.data());
    return s;
  }

  Scalar scalar_neg(const Scalar& a) const override {
    Scalar s;
    crypto_core_ristretto255_scalar_negate(s.bytes.data(), a.bytes.data());
    return s;
  }

  Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
    Scalar s;
    crypto_core_ristretto255_scalar_mul(s.bytes.data(), a.bytes.data(), b.bytes.data());
    return s;
  }

  bool is_canonical_scalar(ByteView bytes) const override {
    if (bytes.size() != scalar_width()) return false;
    std::array<std::uint8_t, 64> wide{};
    std::memcpy(wide.data(), bytes.data(), bytes.size());
    Scalar reduced;
    crypto_core_ristretto255_scalar_reduce(reduced.bytes.data(), wide.data());
    return std::memcmp(reduced.bytes.data(), bytes.data(), bytes.size()) == 0;
  }

 private:
  GroupElement generator_;
  GroupElement second_;
};

}  // namespace

const Group& ristretto255_group() {
  static const Ristretto255Group group;
  return group;
}

}  // namespace fese
