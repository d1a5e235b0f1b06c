#include "fese/crypto/elgamal.hpp"

#include "fese/error.hpp"

namespace fese {

ElGamalKeypair eg_keygen(const Group& group, Drbg& rng) {
  ElGamalKeypair kp;
  kp.secret = group.random_scalar(rng);
  kp.pub = group.pow_base(kp.secret);
  return kp;
}

Ciphertext eg_encrypt(const Group& group, const GroupElement& pub, const GroupElement& x,
                      Drbg& rng) {
  require(group.is_element(ByteView(x.bytes.data(), group.element_width())),
          ErrorCode::kEncoding, "plaintext is not a group element");
  Scalar r = group.random_scalar(rng);
  return {group.pow_base(r), group.mul(group.pow(pub, r), x)};
}

GroupElement eg_decrypt(const Group& group, const Scalar& secret, const Ciphertext& c) {
  return group.mul(c.y2, group.pow(c.y1, group.scalar_neg(secret)));
}

Ciphertext eg_mul(const Group& group, const Ciphertext& a, const Ciphertext& b) {
  return {group.mul(a.y1, b.y1), group.mul(a.y2, b.y2)};
}

Ciphertext eg_pow(const Group& group, const Ciphertext& c, const Scalar& e) {
  require(!group.scalar_is_zero(e), ErrorCode::kParameter,
          "degenerate exponent: e = 0 mod q");
  return {group.pow(c.y1, e), group.pow(c.y2, e)};
}

Ciphertext eg_rerandomize(const Group& group, const GroupElement& pub, const Ciphertext& c,
                          Drbg& rng) {
  Scalar r = group.random_scalar(rng);
  return {group.mul(c.y1, group.pow_base(r)), group.mul(c.y2, group.pow(pub, r))};
}

void encode_ciphertext(const Group& group, const Ciphertext& c, ByteWriter& w) {
  group.encode(c.y1, w);
  group.encode(c.y2, w);
}

Ciphertext decode_ciphertext(const Group& group, ByteReader& r) {
  Ciphertext c;
  c.y1 = group.read(r);
  c.y2 = group.read(r);
  return c;
}

}  // namespace fese
