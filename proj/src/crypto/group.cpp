#include "fese/crypto/group.hpp"

#include <cstring>

#include "fese/error.hpp"

namespace fese {

std::size_t GroupElementHash::operator()(const GroupElement& e) const noexcept {
  // Encodings are uniform-looking; eight leading bytes are plenty.
  std::uint64_t v;
  std::memcpy(&v, e.bytes.data(), sizeof v);
  return static_cast<std::size_t>(v ^ (v >> 29));
}

std::string_view group_kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::kRistretto255: return "ristretto255";
    case GroupKind::kTestSchnorr61: return "test-schnorr61";
  }
  return "unknown";
}

GroupKind parse_group_kind(std::string_view name) {
  if (name == "ristretto255") return GroupKind::kRistretto255;
  if (name == "test-schnorr61") return GroupKind::kTestSchnorr61;
  fail(ErrorCode::kConfig, "unknown group \"" + std::string(name) + "\"");
}

Scalar Group::random_scalar(Drbg& rng) const {
  for (;;) {
    std::array<std::uint8_t, 64> wide;
    rng.fill(wide);
    Scalar s = scalar_from_wide(wide);
    if (!scalar_is_zero(s)) return s;
  }
}

GroupElement Group::random_element(Drbg& rng) const {
  std::array<std::uint8_t, 64> wide;
  rng.fill(wide);
  return hash_to_element("fese/random-element", wide);
}

void Group::encode(const GroupElement& e, ByteWriter& w) const {
  w.raw(ByteView(e.bytes.data(), element_width()));
}

Bytes Group::encode(const GroupElement& e) const {
  return Bytes(e.bytes.begin(), e.bytes.begin() + static_cast<std::ptrdiff_t>(element_width()));
}

GroupElement Group::decode(ByteView encoded) const {
  require(encoded.size() == element_width() && is_element(encoded), ErrorCode::kEncoding,
          "bytes are not a canonical element of " + std::string(group_kind_name(kind())));
  GroupElement e;
  std::memcpy(e.bytes.data(), encoded.data(), encoded.size());
  return e;
}

void Group::encode_scalar(const Scalar& s, ByteWriter& w) const {
  w.raw(ByteView(s.bytes.data(), scalar_width()));
}

Scalar Group::decode_scalar(ByteView bytes) const {
  require(bytes.size() == scalar_width() && is_canonical_scalar(bytes), ErrorCode::kEncoding,
          "bytes are not a canonical scalar");
  Scalar s;
  std::memcpy(s.bytes.data(), bytes.data(), bytes.size());
  return s;
}

}  // namespace fese

namespace fese {

const Group& ristretto255_group();
const Group& test_schnorr_group();

const Group& group_for(GroupKind kind) {
  switch (kind) {
    case GroupKind::kRistretto255: return ristretto255_group();
    case GroupKind::kTestSchnorr61: return test_schnorr_group();
  }
  fail(ErrorCode::kEncoding, "unknown group kind " + std::to_string(static_cast<int>(kind)));
}

}  // namespace fese
