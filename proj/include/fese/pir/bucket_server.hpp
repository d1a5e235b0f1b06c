#pragma once

#include <functional>
#include <optional>
#include <shared_mutex>

#include "fese/pir/bucket_store.hpp"
#include "fese/pir/wire.hpp"

namespace fese {

/// Applied to every bucket the server sends back (used for per-session
/// re-randomization); receives and returns one bucket's bytes.
using BucketTransform = std::function<Bytes(ByteView bucket)>;

/// Server side of the PIR/PIS transports. Updates take an exclusive lock,
/// queries a shared one, so reads may run concurrently between writes.
class BucketServer {
 public:
  explicit BucketServer(BucketStore store) : store_(std::move(store)) {}

  static bool is_pir_frame(FrameType type);

  /// Answers QUERY_* and UPDATE_* frames. Failures become ERR frames.
  Frame handle(const Frame& request, const BucketTransform& transform = nullptr);

  BucketStore snapshot() const;
  StoreShape shape() const;

 private:
  Frame handle_locked(const Frame& request, const BucketTransform& transform);

  mutable std::shared_mutex mutex_;
  BucketStore store_;
};

}  // namespace fese
