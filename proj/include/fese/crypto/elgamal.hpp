#pragma once

#include "fese/bytes.hpp"
#include "fese/crypto/group.hpp"
#include "fese/random.hpp"

namespace fese {

struct ElGamalKeypair {
  Scalar secret;       ///< v
  GroupElement pub;    ///< h = g^v
};

/// (y1, y2) = (g^r, h^r * x). Serialized as y1 || y2.
struct Ciphertext {
  GroupElement y1;
  GroupElement y2;
  friend auto operator<=>(const Ciphertext&, const Ciphertext&) = default;
};

ElGamalKeypair eg_keygen(const Group& group, Drbg& rng);

/// Throws kEncoding if x is not a group element.
Ciphertext eg_encrypt(const Group& group, const GroupElement& pub, const GroupElement& x,
                      Drbg& rng);
GroupElement eg_decrypt(const Group& group, const Scalar& secret, const Ciphertext& c);

/// Component-wise product; decrypts to the product of the plaintexts.
Ciphertext eg_mul(const Group& group, const Ciphertext& a, const Ciphertext& b);

/// Component-wise exponentiation; decrypts to x^e. Throws kParameter for
/// e = 0 mod q, which would erase the plaintext.
Ciphertext eg_pow(const Group& group, const Ciphertext& c, const Scalar& e);

/// Fresh-looking ciphertext of the same plaintext (multiplies by Enc(1)).
Ciphertext eg_rerandomize(const Group& group, const GroupElement& pub, const Ciphertext& c,
                          Drbg& rng);

void encode_ciphertext(const Group& group, const Ciphertext& c, ByteWriter& w);
Ciphertext decode_ciphertext(const Group& group, ByteReader& r);

}  // namespace fese
