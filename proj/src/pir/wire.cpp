#include "fese/pir/wire.hpp"

namespace fese {

std::string_view frame_type_name(FrameType type) {
  switch (type) {
    case FrameType::kQueryDirect: return "QUERY_DIRECT";
    case FrameType::kQueryBatch: return "QUERY_BATCH";
    case FrameType::kUpdateDirect: return "UPDATE_DIRECT";
    case FrameType::kUpdateRewrite: return "UPDATE_REWRITE";
    case FrameType::kRespBucket: return "RESP_BUCKET";
    case FrameType::kRespStore: return "RESP_STORE";
    case FrameType::kAck: return "ACK";
    case FrameType::kErr: return "ERR";
    case FrameType::kQueryRestricted: return "QUERY_RESTRICTED";
    case FrameType::kSendInit: return "SEND_INIT";
    case FrameType::kSendId: return "SEND_ID";
    case FrameType::kSendPayload: return "SEND_PAYLOAD";
    case FrameType::kSendIndex: return "SEND_INDEX";
    case FrameType::kRetrieveBegin: return "RETRIEVE_BEGIN";
    case FrameType::kRerandPub: return "RERAND_PUB";
    case FrameType::kFetchPayload: return "FETCH_PAYLOAD";
    case FrameType::kRespPayload: return "RESP_PAYLOAD";
    case FrameType::kHello: return "HELLO";
  }
  return "UNKNOWN";
}

bool is_known_frame_type(std::uint8_t raw) {
  return (raw >= 0x01 && raw <= 0x09) || (raw >= 0x10 && raw <= 0x18);
}

Bytes encode_frame(const Frame& frame) {
  require(frame.payload.size() <= kMaxFramePayload, ErrorCode::kProtocol, "frame too large");
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(frame.type));
  w.u32(static_cast<std::uint32_t>(frame.payload.size()));
  w.raw(frame.payload);
  return std::move(w).take();
}

std::uint32_t parse_frame_header(ByteView header, FrameType& type) {
  require(header.size() == kFrameHeaderSize, ErrorCode::kTransport, "short frame header");
  require(is_known_frame_type(header[0]), ErrorCode::kProtocol,
          "unknown frame type 0x" + to_hex(header.first(1)));
  type = static_cast<FrameType>(header[0]);
  ByteReader r(header.subspan(1));
  std::uint32_t len = r.u32();
  require(len <= kMaxFramePayload, ErrorCode::kProtocol, "frame length exceeds limit");
  return len;
}

Frame decode_frame(ByteView data) {
  require(data.size() >= kFrameHeaderSize, ErrorCode::kTransport, "truncated frame");
  Frame f;
  std::uint32_t len = parse_frame_header(data.first(kFrameHeaderSize), f.type);
  require(data.size() - kFrameHeaderSize == len, ErrorCode::kTransport,
          "frame length field does not match data");
  auto body = data.subspan(kFrameHeaderSize);
  f.payload.assign(body.begin(), body.end());
  return f;
}

Frame make_error_frame(ErrorCode code, std::string_view message) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(code));
  w.raw(message);
  return {FrameType::kErr, std::move(w).take()};
}

void raise_error_frame(const Frame& frame) {
  ByteReader r(frame.payload);
  auto raw = r.remaining() > 0 ? r.u8() : static_cast<std::uint8_t>(ErrorCode::kProtocol);
  auto rest = r.raw(r.remaining());
  auto code = raw <= static_cast<std::uint8_t>(ErrorCode::kCorruptShare)
                  ? static_cast<ErrorCode>(raw)
                  : ErrorCode::kProtocol;
  throw Error(code, "server: " + std::string(rest.begin(), rest.end()));
}

}  // namespace fese
