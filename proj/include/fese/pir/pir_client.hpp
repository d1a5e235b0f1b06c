#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "fese/pir/bucket_store.hpp"
#include "fese/pir/channel.hpp"

namespace fese {

enum class QueryTransport : std::uint8_t {
  /// Index sent in clear, one frame per bucket. No query privacy.
  kDirect = 0,
  /// Whole store streamed for every retrieve; the client selects locally.
  /// The server's view is independent of the queried indices.
  kObliviousBatch = 1,
  /// All indices of one retrieve in a single frame; the server returns only
  /// those buckets. No query privacy, but limits what the client sees.
  kRestricted = 2,
};

enum class UpdateTransport : std::uint8_t {
  /// Bucket and slot sent in clear.
  kDirect = 0,
  /// Client downloads the store, writes locally, re-encrypts every slot and
  /// uploads the full store.
  kFullRewrite = 1,
};

std::string_view query_transport_name(QueryTransport t);
std::string_view update_transport_name(UpdateTransport t);
QueryTransport parse_query_transport(std::string_view name);
UpdateTransport parse_update_transport(std::string_view name);

/// Contents of bucket alpha.
Bytes pir_query(Channel& channel, QueryTransport transport, const StoreShape& shape,
                BucketIndex alpha);

/// Contents of each listed bucket, in order. The batch transport downloads
/// the store once for the whole list.
std::vector<Bytes> pir_query_many(Channel& channel, QueryTransport transport,
                                  const StoreShape& shape, std::span<const BucketIndex> alphas);

struct SlotWrite {
  BucketIndex alpha = 0;
  std::size_t slot = 0;
  Bytes value;
};

void pis_update_direct(Channel& channel, const SlotWrite& write);

/// Full-rewrite update: download, apply all writes, call `rerandomize` on
/// the complete image, upload.
void pis_update_rewrite(Channel& channel, const StoreShape& shape,
                        std::span<const SlotWrite> writes,
                        const std::function<void(Bytes&)>& rerandomize);

}  // namespace fese
