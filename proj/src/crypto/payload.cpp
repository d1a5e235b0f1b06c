#include "fese/crypto/payload.hpp"

#include <sodium.h>

#include "fese/error.hpp"

namespace fese {
namespace {

using Key = std::array<std::uint8_t, crypto_aead_xchacha20poly1305_ietf_KEYBYTES>;

Key derive_key(const Group& group, const GroupElement& ephemeral, const GroupElement& shared) {
  static constexpr std::string_view kLabel = "fese/payload-kem";
  ByteWriter w;
  w.raw(kLabel);
  group.encode(ephemeral, w);
  group.encode(shared, w);
  Key key;
  crypto_generichash(key.data(), key.size(), w.bytes().data(), w.size(), nullptr, 0);
  return key;
}

// Every key encrypts exactly one message, so a fixed nonce is safe.
constexpr std::array<std::uint8_t, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> kNonce{};

}  // namespace

std::size_t payload_overhead(const Group& group) {
  return group.element_width() + crypto_aead_xchacha20poly1305_ietf_ABYTES;
}

Bytes payload_encrypt(const Group& group, const GroupElement& pub, ByteView plaintext,
                      Drbg& rng) {
  Scalar r = group.random_scalar(rng);
  GroupElement ephemeral = group.pow_base(r);
  Key key = derive_key(group, ephemeral, group.pow(pub, r));

  Bytes out = group.encode(ephemeral);
  const std::size_t head = out.size();
  out.resize(head + plaintext.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(out.data() + head, &written, plaintext.data(),
                                             plaintext.size(), nullptr, 0, nullptr,
                                             kNonce.data(), key.data());
  sodium_memzero(key.data(), key.size());
  return out;
}

Bytes payload_decrypt(const Group& group, const Scalar& secret, ByteView ciphertext) {
  const std::size_t w = group.element_width();
  require(ciphertext.size() >= payload_overhead(group), ErrorCode::kDecryption,
          "payload ciphertext too short");
  GroupElement ephemeral;
  try {
    ephemeral = group.decode(ciphertext.first(w));
  } catch (const Error&) {
    fail(ErrorCode::kDecryption, "payload ciphertext has an invalid ephemeral key");
  }
  Key key = derive_key(group, ephemeral, group.pow(ephemeral, secret));
  auto body = ciphertext.subspan(w);
  Bytes out(body.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long written = 0;
  int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(out.data(), &written, nullptr, body.data(),
                                                      body.size(), nullptr, 0, kNonce.data(),
                                                      key.data());
  sodium_memzero(key.data(), key.size());
  require(rc == 0, ErrorCode::kDecryption, "payload authentication failed");
  return out;
}

}  // namespace fese
