#include "fese/random.hpp"

#include <sodium.h>

#include <cstring>

#include "fese/bytes.hpp"
#include "fese/error.hpp"

namespace fese {

Seed parse_seed(std::string_view hex) {
  require(hex.size() == 64, ErrorCode::kParameter,
          "seed must be 64 hex characters (32 bytes)");
  auto bytes = from_hex(hex);
  Seed seed{};
  std::memcpy(seed.data(), bytes.data(), seed.size());
  return seed;
}

Seed seed_from_u64(std::uint64_t v) {
  Seed seed{};
  for (int i = 0; i < 8; ++i) seed[24 + i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  return seed;
}

Drbg::Drbg(const Seed& seed) : seed_(seed) {
  if (sodium_init() < 0) fail(ErrorCode::kParameter, "libsodium initialisation failed");
}

void Drbg::refill() {
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) {
    nonce[4 + i] = static_cast<std::uint8_t>(block_counter_ >> (56 - 8 * i));
  }
  ++block_counter_;
  crypto_stream_chacha20_ietf(buffer_.data(), buffer_.size(), nonce.data(), seed_.data());
  buffer_pos_ = 0;
}

void Drbg::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (buffer_pos_ == buffer_.size()) refill();
    std::size_t n = std::min(out.size() - done, buffer_.size() - buffer_pos_);
    std::memcpy(out.data() + done, buffer_.data() + buffer_pos_, n);
    buffer_pos_ += n;
    done += n;
  }
}

std::uint64_t Drbg::next_u64() {
  std::array<std::uint8_t, 8> b;
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Drbg::uniform(std::uint64_t bound) {
  require(bound > 0, ErrorCode::kParameter, "uniform bound must be positive");
  // Reject the incomplete top copy of [0, bound).
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

double Drbg::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Drbg Drbg::fork(std::string_view label) const {
  Seed child{};
  crypto_generichash(child.data(), child.size(),
                     reinterpret_cast<const unsigned char*>(label.data()), label.size(),
                     seed_.data(), seed_.size());
  return Drbg(child);
}

}  // namespace fese
