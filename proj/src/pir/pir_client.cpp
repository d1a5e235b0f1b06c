#include "fese/pir/pir_client.hpp"

#include "fese/error.hpp"

namespace fese {

Frame call(Channel& channel, const Frame& request, FrameType expected) {
  Frame reply = channel.exchange(request);
  if (reply.type == FrameType::kErr) raise_error_frame(reply);
  require(reply.type == expected, ErrorCode::kProtocol,
          "expected " + std::string(frame_type_name(expected)) + ", got " +
              std::string(frame_type_name(reply.type)));
  return reply;
}

Frame LoopbackChannel::exchange(const Frame& request) {
  if (capture_) capture_->record(Direction::kClientToServer, request);
  Frame reply = handler_(request);
  if (capture_) capture_->record(Direction::kServerToClient, reply);
  return reply;
}

std::string_view query_transport_name(QueryTransport t) {
  switch (t) {
    case QueryTransport::kDirect: return "direct";
    case QueryTransport::kObliviousBatch: return "oblivious-batch";
    case QueryTransport::kRestricted: return "restricted";
  }
  return "unknown";
}

std::string_view update_transport_name(UpdateTransport t) {
  switch (t) {
    case UpdateTransport::kDirect: return "direct";
    case UpdateTransport::kFullRewrite: return "full-rewrite";
  }
  return "unknown";
}

QueryTransport parse_query_transport(std::string_view name) {
  if (name == "direct") return QueryTransport::kDirect;
  if (name == "oblivious-batch") return QueryTransport::kObliviousBatch;
  if (name == "restricted") return QueryTransport::kRestricted;
  fail(ErrorCode::kConfig, "unknown query transport \"" + std::string(name) + "\"");
}

UpdateTransport parse_update_transport(std::string_view name) {
  if (name == "direct") return UpdateTransport::kDirect;
  if (name == "full-rewrite") return UpdateTransport::kFullRewrite;
  fail(ErrorCode::kConfig, "unknown update transport \"" + std::string(name) + "\"");
}

namespace {

Bytes fetch_store(Channel& channel, const StoreShape& shape) {
  Frame reply = call(channel, {FrameType::kQueryBatch, {}}, FrameType::kRespStore);
  require(reply.payload.size() == shape.total_bytes(), ErrorCode::kTransport,
          "truncated store stream: " + std::to_string(reply.payload.size()) + " of " +
              std::to_string(shape.total_bytes()) + " bytes");
  return std::move(reply.payload);
}

Bytes slice_bucket(const Bytes& image, const StoreShape& shape, BucketIndex alpha) {
  auto begin = image.begin() + static_cast<std::ptrdiff_t>(alpha * shape.bucket_bytes());
  return Bytes(begin, begin + static_cast<std::ptrdiff_t>(shape.bucket_bytes()));
}

void check_index(const StoreShape& shape, BucketIndex alpha) {
  require(alpha < shape.m, ErrorCode::kProtocol,
          "bucket index " + std::to_string(alpha) + " out of range");
}

}  // namespace

Bytes pir_query(Channel& channel, QueryTransport transport, const StoreShape& shape,
                BucketIndex alpha) {
  BucketIndex one[] = {alpha};
  return std::move(pir_query_many(channel, transport, shape, one).front());
}

std::vector<Bytes> pir_query_many(Channel& channel, QueryTransport transport,
                                  const StoreShape& shape, std::span<const BucketIndex> alphas) {
  for (auto alpha : alphas) check_index(shape, alpha);
  std::vector<Bytes> out;
  out.reserve(alphas.size());
  switch (transport) {
    case QueryTransport::kDirect:
      for (auto alpha : alphas) {
        ByteWriter w;
        w.u32(alpha);
        Frame reply = call(channel, {FrameType::kQueryDirect, std::move(w).take()},
                           FrameType::kRespBucket);
        require(reply.payload.size() == shape.bucket_bytes(), ErrorCode::kTransport,
                "truncated bucket response");
        out.push_back(std::move(reply.payload));
      }
      break;
    case QueryTransport::kRestricted: {
      require(alphas.size() <= 0xffff, ErrorCode::kProtocol, "too many indices in one query");
      ByteWriter w;
      w.u16(static_cast<std::uint16_t>(alphas.size()));
      for (auto alpha : alphas) w.u32(alpha);
      Frame reply = call(channel, {FrameType::kQueryRestricted, std::move(w).take()},
                         FrameType::kRespBucket);
      require(reply.payload.size() == alphas.size() * shape.bucket_bytes(),
              ErrorCode::kTransport, "truncated bucket response");
      StoreShape view = shape;
      view.m = alphas.size();
      for (std::size_t k = 0; k < alphas.size(); ++k) {
        out.push_back(slice_bucket(reply.payload, view, static_cast<BucketIndex>(k)));
      }
      break;
    }
    case QueryTransport::kObliviousBatch: {
      Bytes image = fetch_store(channel, shape);
      for (auto alpha : alphas) out.push_back(slice_bucket(image, shape, alpha));
      break;
    }
  }
  return out;
}

void pis_update_direct(Channel& channel, const SlotWrite& write) {
  ByteWriter w;
  w.u32(write.alpha);
  w.u16(static_cast<std::uint16_t>(write.slot));
  w.raw(write.value);
  call(channel, {FrameType::kUpdateDirect, std::move(w).take()}, FrameType::kAck);
}

void pis_update_rewrite(Channel& channel, const StoreShape& shape,
                        std::span<const SlotWrite> writes,
                        const std::function<void(Bytes&)>& rerandomize) {
  BucketStore local(shape, fetch_store(channel, shape));
  for (const auto& wr : writes) local.set_slot(wr.alpha, wr.slot, wr.value);
  Bytes image = local.image();
  if (rerandomize) rerandomize(image);
  call(channel, {FrameType::kUpdateRewrite, std::move(image)}, FrameType::kAck);
}

}  // namespace fese
