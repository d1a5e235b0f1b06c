#include "fese/protocol/keygen.hpp"

namespace fese {

Slot padding_slot(const Group& group, Drbg& rng) {
  // (g^r, U) with U uniform has the distribution of Enc(random element).
  Slot s;
  s.marker = {group.pow_base(group.random_scalar(rng)), group.random_element(rng)};
  s.payload = {group.pow_base(group.random_scalar(rng)), group.random_element(rng)};
  return s;
}

KeygenOutput keygen(const SchemeParams& params, const Seed& seed) {
  params.validate();
  const Group& group = group_for(params.group);
  Drbg root(seed);

  KeygenOutput out;
  PublicBundle& pub = out.pub;
  pub.params = params;
  Drbg lsh_rng = root.fork("lsh");
  pub.lsh = LshFamily::build(params.n_bits, params.t, params.mu, lsh_rng);
  Drbg key_rng = root.fork("bloom-key");
  key_rng.fill(pub.bloom_key);
  Drbg eg_rng = root.fork("elgamal");
  ElGamalKeypair kp = eg_keygen(group, eg_rng);
  pub.elgamal_pub = kp.pub;
  out.sec = SecretBundle{pub, kp.secret};

  StoreShape shape{params.m, params.l, slot_width(group)};
  BucketStore store(shape);
  Drbg pad_rng = root.fork("padding");
  for (BucketIndex alpha = 0; alpha < params.m; ++alpha)
    for (std::size_t k = 0; k < params.l; ++k)
      store.set_slot(alpha, k, encode_slot(group, padding_slot(group, pad_rng)));

  out.state.header = pub.header();
  out.state.store = std::move(store);
  out.allocator = SlotAllocator(params.m, params.l);
  return out;
}

}  // namespace fese
