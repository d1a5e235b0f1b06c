#include "fese/pir/transcript.hpp"

namespace fese {

std::size_t Transcript::total_bytes() const {
  std::size_t n = 0;
  for (const auto& [dir, bytes] : entries) n += bytes.size();
  return n;
}

std::vector<std::pair<Direction, FrameType>> Transcript::message_sequence() const {
  std::vector<std::pair<Direction, FrameType>> out;
  out.reserve(entries.size());
  for (const auto& [dir, bytes] : entries) out.emplace_back(dir, decode_frame(bytes).type);
  return out;
}

std::vector<std::size_t> Transcript::lengths() const {
  std::vector<std::size_t> out;
  for (const auto& [dir, bytes] : entries) out.push_back(bytes.size());
  return out;
}

Bytes Transcript::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("FTRN"));
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& [dir, bytes] : entries) {
    w.u8(static_cast<std::uint8_t>(dir));
    w.blob(bytes);
  }
  return std::move(w).take();
}

Transcript Transcript::deserialize(ByteView data) {
  ByteReader r(data);
  r.expect_magic("FTRN");
  Transcript t;
  std::uint32_t n = r.u32();
  for (std::uint32_t k = 0; k < n; ++k) {
    std::uint8_t dir = r.u8();
    require(dir <= 1, ErrorCode::kFormat, "bad transcript direction");
    auto frame = r.blob();
    decode_frame(frame);
    t.entries.emplace_back(static_cast<Direction>(dir), Bytes(frame.begin(), frame.end()));
  }
  r.expect_end();
  return t;
}

}  // namespace fese
