#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fese/bloom.hpp"
#include "fese/bytes.hpp"
#include "fese/crypto/elgamal.hpp"

namespace fese {

struct StoreShape {
  std::size_t m = 0;           ///< bucket count
  std::size_t l = 0;           ///< slots per bucket
  std::size_t slot_width = 0;  ///< bytes per slot

  std::size_t bucket_bytes() const { return l * slot_width; }
  std::size_t total_bytes() const { return m * bucket_bytes(); }
  friend bool operator==(const StoreShape&, const StoreShape&) = default;
};

/// m buckets of exactly l fixed-width slots. The store never records which
/// slots hold data and which hold padding.
class BucketStore {
 public:
  BucketStore() = default;
  explicit BucketStore(StoreShape shape);
  BucketStore(StoreShape shape, Bytes image);

  const StoreShape& shape() const { return shape_; }
  ByteView bucket(BucketIndex alpha) const;
  ByteView slot(BucketIndex alpha, std::size_t k) const;
  void set_slot(BucketIndex alpha, std::size_t k, ByteView value);
  const Bytes& image() const { return data_; }
  void replace_image(Bytes image);

  // u32 m, u16 l, u16 slot_width, raw image
  void serialize(ByteWriter& w) const;
  static BucketStore deserialize(ByteReader& r);

  friend bool operator==(const BucketStore&, const BucketStore&) = default;

 private:
  void check(BucketIndex alpha, std::size_t k) const;

  StoreShape shape_;
  Bytes data_;
};

/// Slot content: a pair of ElGamal ciphertexts, (marker, payload).
struct Slot {
  Ciphertext marker;
  Ciphertext payload;
};

inline std::size_t slot_width(const Group& group) { return 4 * group.element_width(); }
Bytes encode_slot(const Group& group, const Slot& slot);
Slot decode_slot(const Group& group, ByteView bytes);

/// Re-encrypts both ciphertexts of every slot in place with fresh randomness.
void rerandomize_image(const Group& group, const GroupElement& pub, const StoreShape& shape,
                       Bytes& image, Drbg& rng);

/// Writer-side occupancy: how many real entries each bucket holds. Kept by
/// the sender, never by the server.
class SlotAllocator {
 public:
  SlotAllocator() = default;
  SlotAllocator(std::size_t m, std::size_t l);

  std::size_t fill(BucketIndex alpha) const { return fill_.at(alpha); }
  std::size_t capacity() const { return l_; }
  std::size_t m() const { return fill_.size(); }

  /// Slot positions for one entry per listed bucket (repeats allowed), or
  /// throws kOverflow naming the first bucket that cannot take them. Nothing
  /// is reserved on failure.
  std::vector<std::size_t> reserve(std::span<const BucketIndex> indices);

  // "FEOC", u32 m, u16 l, m x u16 fill
  Bytes serialize() const;
  static SlotAllocator deserialize(ByteView data);

  friend bool operator==(const SlotAllocator&, const SlotAllocator&) = default;

 private:
  std::size_t l_ = 0;
  std::vector<std::uint16_t> fill_;
};

}  // namespace fese
