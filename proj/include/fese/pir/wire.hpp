#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "fese/bytes.hpp"
#include "fese/error.hpp"

namespace fese {

/// Frame layout: u8 type, u32 big-endian payload length, payload.
enum class FrameType : std::uint8_t {
  kQueryDirect = 0x01,      ///< u32 alpha
  kQueryBatch = 0x02,       ///< empty; answered with the whole store
  kUpdateDirect = 0x03,     ///< u32 alpha, u16 slot, slot bytes
  kUpdateRewrite = 0x04,    ///< full store image
  kRespBucket = 0x05,       ///< one or more buckets, concatenated
  kRespStore = 0x06,        ///< full store image
  kAck = 0x07,
  kErr = 0x08,              ///< u8 error code, message
  kQueryRestricted = 0x09,  ///< u16 count, count x u32 alpha

  kSendInit = 0x10,         ///< empty
  kSendId = 0x11,           ///< u64 identifier
  kSendPayload = 0x12,      ///< u64 identifier, payload ciphertext
  kSendIndex = 0x13,        ///< u64 identifier; closes the indexing phase
  kRetrieveBegin = 0x14,    ///< empty
  kRerandPub = 0x15,        ///< encoded g^{c2}
  kFetchPayload = 0x16,     ///< u64 identifier
  kRespPayload = 0x17,      ///< payload ciphertext
  kHello = 0x18,            ///< index header digest
};

std::string_view frame_type_name(FrameType type);
bool is_known_frame_type(std::uint8_t raw);

struct Frame {
  FrameType type = FrameType::kAck;
  Bytes payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

constexpr std::size_t kFrameHeaderSize = 5;
constexpr std::uint32_t kMaxFramePayload = 1u << 30;

Bytes encode_frame(const Frame& frame);
/// Parses exactly one frame occupying all of `data`.
Frame decode_frame(ByteView data);
/// Payload length announced by a 5-byte header; validates the type byte.
std::uint32_t parse_frame_header(ByteView header, FrameType& type);

Frame make_error_frame(ErrorCode code, std::string_view message);
/// Rethrows an ERR frame as the Error it carries.
[[noreturn]] void raise_error_frame(const Frame& frame);

}  // namespace fese
