#pragma once

#include "fese/bytes.hpp"
#include "fese/crypto/group.hpp"
#include "fese/random.hpp"

namespace fese {

/// Hybrid encryption of arbitrary bytes under an ElGamal public key:
/// R = g^r, key = H(R || h^r), body = XChaCha20-Poly1305(key, plaintext).
/// Output is R || body || tag, so its length is element_width + n + 16 for an
/// n-byte plaintext regardless of content.
Bytes payload_encrypt(const Group& group, const GroupElement& pub, ByteView plaintext,
                      Drbg& rng);

/// Throws kDecryption if the tag does not verify (wrong key or tampering).
Bytes payload_decrypt(const Group& group, const Scalar& secret, ByteView ciphertext);

std::size_t payload_overhead(const Group& group);

}  // namespace fese
