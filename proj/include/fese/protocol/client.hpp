#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fese/crypto/dlog.hpp"
#include "fese/pir/bucket_store.hpp"
#include "fese/pir/channel.hpp"
#include "fese/protocol/keys.hpp"
#include "fese/protocol/server.hpp"
#include "fese/random.hpp"
#include "fese/templates.hpp"

namespace fese {

/// Work done by a client, split the way request cost is usually reported.
struct OpCounters {
  std::uint64_t hash_evals = 0;     ///< composite index evaluations
  std::uint64_t encryptions = 0;    ///< ElGamal encryptions and re-encryptions
  std::uint64_t decryptions = 0;    ///< ElGamal decryptions
  std::uint64_t cached_decryptions = 0;  ///< slots answered from the payload memo
  std::uint64_t dlog_solves = 0;
  std::uint64_t frames = 0;         ///< request frames sent
  std::uint64_t bytes_sent = 0;     ///< framed bytes, client to server
  std::uint64_t bytes_received = 0; ///< framed bytes, server to client

  OpCounters& operator+=(const OpCounters& o);
};

/// Wraps a channel and counts frames and bytes.
class CountingChannel final : public Channel {
 public:
  CountingChannel(Channel& inner, OpCounters& counters) : inner_(inner), counters_(counters) {}
  Frame exchange(const Frame& request) override;

 private:
  Channel& inner_;
  OpCounters& counters_;
};

/// Sends HELLO with the header digest; throws kHeaderMismatch if the server
/// hosts an index built with other parameters.
void handshake(Channel& channel, const IndexHeader& header);

/// Sender side of Send. Keeps the slot allocator for the index it writes to.
class Sender {
 public:
  Sender(PublicBundle pub, SlotAllocator allocator, const Seed& seed);

  /// Runs Send for x and returns the identifier the server assigned. Throws
  /// kOverflow ("enrollment rejected") before contacting the server if any
  /// addressed bucket is full; the allocator is then unchanged.
  Identifier send(Channel& channel, const BinaryTemplate& x);

  const SlotAllocator& allocator() const { return allocator_; }
  const OpCounters& counters() const { return counters_; }
  const PublicBundle& pub() const { return pub_; }

 private:
  std::vector<SlotWrite> base_entries(Identifier id, const std::vector<BucketIndex>& idx,
                                      const std::vector<std::size_t>& slots);
  std::vector<SlotWrite> extended_entries(Identifier id, const std::vector<BucketIndex>& idx,
                                          const std::vector<std::size_t>& slots);

  PublicBundle pub_;
  const Group& group_;
  CompositeFamily comp_;
  SlotAllocator allocator_;
  Drbg rng_;
  OpCounters counters_;
};

/// Receiver side of Retrieve, plus payload fetches.
class Receiver {
 public:
  explicit Receiver(SecretBundle sec);

  /// Phi(x'), sorted ascending. Throws kCorruptShare when a tag candidate has
  /// no discrete log below 2^tag_bits.
  std::vector<Identifier> retrieve(Channel& channel, const BinaryTemplate& x);

  /// Decrypted payload stored under id. Throws kIndexInconsistency if the
  /// server has no such record.
  Bytes fetch_payload(Channel& channel, Identifier id);
  BinaryTemplate fetch_template(Channel& channel, Identifier id);

  const OpCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }
  const SecretBundle& sec() const { return sec_; }

 private:
  using ElementSet = std::vector<GroupElement>;  // sorted, unique

  std::vector<Identifier> retrieve_base(const std::vector<BucketIndex>& idx,
                                        const std::vector<Bytes>& buckets);
  std::vector<Identifier> retrieve_extended(const std::vector<BucketIndex>& idx,
                                            const std::vector<Bytes>& buckets,
                                            const GroupElement& base);
  std::vector<Slot> decode_bucket(const Bytes& bucket) const;
  Identifier tag_of(DiscreteLogSolver& solver, const GroupElement& e);

  SecretBundle sec_;
  const Group& group_;
  CompositeFamily comp_;
  StoreShape shape_;
  OpCounters counters_;
  std::unique_ptr<DiscreteLogSolver> base_solver_;  ///< base g, kept across retrieves
  /// Base mode: payload ciphertext bytes -> plaintext. Unchanged slots come
  /// back byte-identical, so repeated buckets skip decryption.
  std::unordered_map<std::string, GroupElement> payload_memo_;
  std::unordered_map<GroupElement, Identifier, GroupElementHash> base_memo_;
};

}  // namespace fese
