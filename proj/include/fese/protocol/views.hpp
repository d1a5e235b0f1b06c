#pragma once

#include <vector>

#include "fese/pir/transcript.hpp"
#include "fese/protocol/client.hpp"
#include "fese/protocol/keygen.hpp"

namespace fese {

/// Server's view of one Send of x against a copy of `state`.
Transcript capture_send_view(const ServerState& state, const PublicBundle& pub,
                             const SlotAllocator& allocator, const BinaryTemplate& x,
                             const Seed& sender_seed, const Seed& server_seed);

/// Server's view of one Retrieve of x against a copy of `state`.
Transcript capture_retrieve_view(const ServerState& state, const SecretBundle& sec,
                                 const BinaryTemplate& x, const Seed& server_seed);

/// Stand-in server for the symmetric receiver game: knows only the public key
/// and the tags the query should return, nothing about the stored index.
/// Speaks HELLO, RETRIEVE_BEGIN and QUERY_RESTRICTED. Each tag gets a fresh
/// marker and a share split raised to c2, placed one share per requested
/// position; every other slot is an encryption of a random pair.
class SimulatorServer {
 public:
  SimulatorServer(PublicBundle pub, std::vector<Identifier> tags, const Seed& seed);

  Frame handle(const Frame& request);

 private:
  Frame answer_restricted(ByteReader& r);

  PublicBundle pub_;
  const Group& group_;
  std::vector<Identifier> tags_;
  Drbg rng_;
  Scalar c2_;
  bool begun_ = false;
};

/// Client view of a retrieve, re-opened with the secret key: for every
/// distinct marker, the product of the payload plaintexts carrying it.
struct MarkerProducts {
  GroupElement rerand_pub;                ///< g^{c2} from RERAND_PUB
  std::vector<GroupElement> matched;      ///< markers present in every bucket
  std::vector<GroupElement> unmatched;    ///< all other markers
};

/// Parses an extended-mode retrieve transcript (RESTRICTED or DIRECT
/// transport). `idx` is the index list the client queried.
MarkerProducts open_client_view(const Transcript& view, const SecretBundle& sec,
                                const std::vector<BucketIndex>& idx);

}  // namespace fese
