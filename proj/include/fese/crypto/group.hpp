#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "fese/bytes.hpp"
#include "fese/random.hpp"

namespace fese {

/// Canonical element encoding, left-aligned. Groups narrower than 32 bytes
/// leave the tail zero, so equality on the whole array is element equality.
struct GroupElement {
  std::array<std::uint8_t, 32> bytes{};
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& e) const noexcept;
};

/// Exponent modulo the group order, little-endian.
struct Scalar {
  std::array<std::uint8_t, 32> bytes{};
  friend bool operator==(const Scalar&, const Scalar&) = default;
};

enum class GroupKind : std::uint8_t {
  kRistretto255 = 1,
  /// Order-q subgroup of Z_p^* with q ~ 2^61. Exhaustive tests only; offers
  /// no real security.
  kTestSchnorr61 = 2,
};

std::string_view group_kind_name(GroupKind kind);
GroupKind parse_group_kind(std::string_view name);

/// Prime-order cyclic group with generator g and a second generator f whose
/// discrete log base g nobody knows (f is hashed onto the group).
class Group {
 public:
  virtual ~Group() = default;

  virtual GroupKind kind() const = 0;
  virtual std::size_t element_width() const = 0;
  virtual std::size_t scalar_width() const = 0;

  virtual GroupElement identity() const = 0;
  virtual GroupElement generator() const = 0;
  virtual GroupElement second_generator() const = 0;

  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;
  virtual GroupElement pow(const GroupElement& a, const Scalar& e) const = 0;
  /// g^e, usually faster than pow(generator(), e).
  virtual GroupElement pow_base(const Scalar& e) const = 0;

  virtual bool is_element(ByteView encoded) const = 0;
  virtual GroupElement hash_to_element(std::string_view domain, ByteView data) const = 0;

  virtual Scalar scalar_from_u64(std::uint64_t v) const = 0;
  /// Reduces 64 uniformly random bytes modulo q.
  virtual Scalar scalar_from_wide(ByteView bytes64) const = 0;
  virtual Scalar scalar_add(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar scalar_neg(const Scalar& a) const = 0;
  virtual Scalar scalar_mul(const Scalar& a, const Scalar& b) const = 0;
  virtual bool is_canonical_scalar(ByteView bytes) const = 0;

  GroupElement div(const GroupElement& a, const GroupElement& b) const {
    return mul(a, inverse(b));
  }
  bool scalar_is_zero(const Scalar& s) const { return s == Scalar{}; }
  /// Uniform in [1, q-1].
  Scalar random_scalar(Drbg& rng) const;
  GroupElement random_element(Drbg& rng) const;

  void encode(const GroupElement& e, ByteWriter& w) const;
  Bytes encode(const GroupElement& e) const;
  /// Throws kEncoding unless the bytes are a canonical element encoding.
  GroupElement decode(ByteView encoded) const;
  GroupElement read(ByteReader& r) const { return decode(r.raw(element_width())); }

  void encode_scalar(const Scalar& s, ByteWriter& w) const;
  Scalar decode_scalar(ByteView bytes) const;
};

const Group& group_for(GroupKind kind);

}  // namespace fese
