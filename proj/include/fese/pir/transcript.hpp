#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fese/bytes.hpp"
#include "fese/pir/wire.hpp"

namespace fese {

enum class Direction : std::uint8_t { kClientToServer = 0, kServerToClient = 1 };

/// Byte-exact record of the frames exchanged during one operation. Both
/// parties observe the same frames, so one transcript is the view of either.
struct Transcript {
  std::vector<std::pair<Direction, Bytes>> entries;

  void record(Direction dir, const Frame& frame) { entries.emplace_back(dir, encode_frame(frame)); }
  void clear() { entries.clear(); }

  std::size_t total_bytes() const;
  /// (direction, frame type) per entry.
  std::vector<std::pair<Direction, FrameType>> message_sequence() const;
  std::vector<std::size_t> lengths() const;

  /// "FTRN", u32 count, then per entry u8 direction and a u32-prefixed frame.
  Bytes serialize() const;
  static Transcript deserialize(ByteView data);

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

}  // namespace fese
