#include "fese/bytes.hpp"

#include <sodium.h>

#include <fstream>
#include <iterator>

#include "fese/error.hpp"

namespace fese {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kEncoding: return "encoding error";
    case ErrorCode::kDecryption: return "decryption failure";
    case ErrorCode::kHeaderMismatch: return "header mismatch";
    case ErrorCode::kOverflow: return "bucket overflow";
    case ErrorCode::kProtocol: return "protocol error";
    case ErrorCode::kTransport: return "transport error";
    case ErrorCode::kIndexInconsistency: return "index inconsistency";
    case ErrorCode::kCorruptShare: return "corrupt share";
  }
  return "error";
}

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v >> 8));
  u8(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  u16(static_cast<std::uint16_t>(v >> 16));
  u16(static_cast<std::uint16_t>(v));
}

void ByteWriter::u64(std::uint64_t v) {
  u32(static_cast<std::uint32_t>(v >> 32));
  u32(static_cast<std::uint32_t>(v));
}

void ByteWriter::blob(ByteView data) {
  u32(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
  auto b = raw(2);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t ByteReader::u32() {
  std::uint32_t hi = u16();
  return (hi << 16) | u16();
}

std::uint64_t ByteReader::u64() {
  std::uint64_t hi = u32();
  return (hi << 32) | u32();
}

ByteView ByteReader::raw(std::size_t n) {
  if (n > remaining()) {
    fail(ErrorCode::kFormat, "truncated input: need " + std::to_string(n) +
                                 " bytes, have " + std::to_string(remaining()));
  }
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView ByteReader::blob() { return raw(u32()); }

void ByteReader::expect_magic(std::string_view magic) {
  auto got = raw(magic.size());
  if (!std::equal(got.begin(), got.end(), magic.begin())) {
    fail(ErrorCode::kFormat, "bad magic, expected \"" + std::string(magic) + "\"");
  }
}

void ByteReader::expect_end() const {
  if (remaining() != 0) {
    fail(ErrorCode::kFormat,
         std::to_string(remaining()) + " trailing bytes after record");
  }
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  require(hex.size() % 2 == 0, ErrorCode::kFormat, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    require(hi >= 0 && lo >= 0, ErrorCode::kFormat, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes digest(ByteView data, std::size_t out_len) {
  Bytes out(out_len);
  crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr, 0);
  return out;
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kFormat, "cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kFormat, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  require(static_cast<bool>(out), ErrorCode::kFormat, "short write to " + path);
}

}  // namespace fese
