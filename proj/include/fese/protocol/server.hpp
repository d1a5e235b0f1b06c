#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "fese/crypto/group.hpp"
#include "fese/pir/bucket_server.hpp"
#include "fese/pir/channel.hpp"
#include "fese/protocol/keys.hpp"
#include "fese/random.hpp"

namespace fese {

using Identifier = std::uint64_t;

/// Persistent server state. Stored payloads live in a dense array whose cell
/// number is the identifier, so identifiers never appear as stored values.
struct ServerState {
  IndexHeader header;
  BucketStore store;
  std::vector<Bytes> payloads;  ///< cell phi; empty until SEND_PAYLOAD arrives

  Identifier next_id() const { return payloads.size(); }

  /// Index file: "FESE", u16 version, header, bucket store, u32 record
  /// count, one u32-prefixed payload per record.
  Bytes serialize() const;
  static ServerState deserialize(ByteView data);

  friend bool operator==(const ServerState&, const ServerState&) = default;
};

/// Per-connection retrieve state.
struct ServerSession {
  bool rerandomize = false;
  Scalar c1;
  Scalar c2;
};

/// Honest-but-curious server: assigns identifiers, stores payloads, and
/// answers PIR/PIS frames over the bucket store. In extended mode each
/// RETRIEVE_BEGIN draws fresh (c1, c2) and every bucket sent in that session
/// is raised component-wise to them.
class IndexServer {
 public:
  IndexServer(ServerState state, const Seed& seed);

  Frame handle(const Frame& request, ServerSession& session);

  ServerState snapshot() const;
  const IndexHeader& header() const { return header_; }

  /// Convenience: a loopback channel with its own session.
  std::unique_ptr<Channel> connect(Transcript* capture = nullptr);

 private:
  Frame dispatch(const Frame& request, ServerSession& session);
  Bytes rerandomize_bucket(ByteView bucket, const ServerSession& session) const;

  const Group& group_;
  IndexHeader header_;
  Bytes header_digest_;
  BucketServer buckets_;

  mutable std::mutex payload_mutex_;
  std::vector<Bytes> payloads_;

  std::mutex rng_mutex_;
  Drbg rng_;
};

}  // namespace fese
