#pragma once

#include "fese/pir/bucket_store.hpp"
#include "fese/protocol/keys.hpp"
#include "fese/protocol/server.hpp"
#include "fese/random.hpp"

namespace fese {

struct KeygenOutput {
  PublicBundle pub;
  SecretBundle sec;
  ServerState state;
  SlotAllocator allocator;  ///< sender-side occupancy, all zero
};

/// Draws the LSH family, the Bloom key and the ElGamal pair from forks of
/// `seed`, and fills all m*l slots with padding. Throws kConfig for invalid
/// parameters.
KeygenOutput keygen(const SchemeParams& params, const Seed& seed);

/// One padding slot: both halves look like encryptions of random elements.
Slot padding_slot(const Group& group, Drbg& rng);

}  // namespace fese
