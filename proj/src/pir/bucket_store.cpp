#include "fese/pir/bucket_store.hpp"

#include <cstring>
#include <map>

#include "fese/error.hpp"

namespace fese {

BucketStore::BucketStore(StoreShape shape) : shape_(shape), data_(shape.total_bytes(), 0) {}

BucketStore::BucketStore(StoreShape shape, Bytes image) : shape_(shape) {
  replace_image(std::move(image));
}

void BucketStore::check(BucketIndex alpha, std::size_t k) const {
  require(alpha < shape_.m, ErrorCode::kProtocol,
          "bucket index " + std::to_string(alpha) + " out of range [0, " +
              std::to_string(shape_.m) + ")");
  require(k < shape_.l, ErrorCode::kProtocol, "slot index " + std::to_string(k) + " out of range");
}

ByteView BucketStore::bucket(BucketIndex alpha) const {
  check(alpha, 0);
  return ByteView(data_).subspan(alpha * shape_.bucket_bytes(), shape_.bucket_bytes());
}

ByteView BucketStore::slot(BucketIndex alpha, std::size_t k) const {
  check(alpha, k);
  return ByteView(data_).subspan(alpha * shape_.bucket_bytes() + k * shape_.slot_width,
                                 shape_.slot_width);
}

void BucketStore::set_slot(BucketIndex alpha, std::size_t k, ByteView value) {
  check(alpha, k);
  require(value.size() == shape_.slot_width, ErrorCode::kProtocol, "slot value has wrong width");
  std::memcpy(data_.data() + alpha * shape_.bucket_bytes() + k * shape_.slot_width, value.data(),
              value.size());
}

void BucketStore::replace_image(Bytes image) {
  require(image.size() == shape_.total_bytes(), ErrorCode::kProtocol,
          "store image has " + std::to_string(image.size()) + " bytes, expected " +
              std::to_string(shape_.total_bytes()));
  data_ = std::move(image);
}

void BucketStore::serialize(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(shape_.m));
  w.u16(static_cast<std::uint16_t>(shape_.l));
  w.u16(static_cast<std::uint16_t>(shape_.slot_width));
  w.raw(data_);
}

BucketStore BucketStore::deserialize(ByteReader& r) {
  StoreShape shape;
  shape.m = r.u32();
  shape.l = r.u16();
  shape.slot_width = r.u16();
  auto raw = r.raw(shape.total_bytes());
  return BucketStore(shape, Bytes(raw.begin(), raw.end()));
}

Bytes encode_slot(const Group& group, const Slot& slot) {
  ByteWriter w;
  encode_ciphertext(group, slot.marker, w);
  encode_ciphertext(group, slot.payload, w);
  return std::move(w).take();
}

Slot decode_slot(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  Slot s;
  s.marker = decode_ciphertext(group, r);
  s.payload = decode_ciphertext(group, r);
  r.expect_end();
  return s;
}

void rerandomize_image(const Group& group, const GroupElement& pub, const StoreShape& shape,
                       Bytes& image, Drbg& rng) {
  require(image.size() == shape.total_bytes(), ErrorCode::kProtocol, "store image size mismatch");
  for (std::size_t off = 0; off < image.size(); off += shape.slot_width) {
    Slot s = decode_slot(group, ByteView(image).subspan(off, shape.slot_width));
    s.marker = eg_rerandomize(group, pub, s.marker, rng);
    s.payload = eg_rerandomize(group, pub, s.payload, rng);
    Bytes fresh = encode_slot(group, s);
    std::memcpy(image.data() + off, fresh.data(), fresh.size());
  }
}

SlotAllocator::SlotAllocator(std::size_t m, std::size_t l) : l_(l), fill_(m, 0) {
  require(l >= 1 && l <= 65535, ErrorCode::kParameter, "bucket capacity must lie in [1, 65535]");
}

std::vector<std::size_t> SlotAllocator::reserve(std::span<const BucketIndex> indices) {
  std::map<BucketIndex, std::size_t> wanted;
  for (auto alpha : indices) {
    require(alpha < fill_.size(), ErrorCode::kParameter, "bucket index out of range");
    ++wanted[alpha];
  }
  for (const auto& [alpha, count] : wanted) {
    if (fill_[alpha] + count > l_) {
      fail(ErrorCode::kOverflow, "enrollment rejected: bucket " + std::to_string(alpha) +
                                     " would exceed capacity " + std::to_string(l_));
    }
  }
  std::vector<std::size_t> slots;
  slots.reserve(indices.size());
  for (auto alpha : indices) slots.push_back(fill_[alpha]++);
  return slots;
}

Bytes SlotAllocator::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("FEOC"));
  w.u32(static_cast<std::uint32_t>(fill_.size()));
  w.u16(static_cast<std::uint16_t>(l_));
  for (auto f : fill_) w.u16(f);
  return std::move(w).take();
}

SlotAllocator SlotAllocator::deserialize(ByteView data) {
  ByteReader r(data);
  r.expect_magic("FEOC");
  std::size_t m = r.u32();
  std::size_t l = r.u16();
  SlotAllocator a(m, l);
  for (auto& f : a.fill_) {
    f = r.u16();
    require(f <= l, ErrorCode::kFormat, "occupancy exceeds capacity");
  }
  r.expect_end();
  return a;
}

}  // namespace fese
