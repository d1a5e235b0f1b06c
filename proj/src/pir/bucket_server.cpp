#include "fese/pir/bucket_server.hpp"

#include <mutex>

#include "fese/error.hpp"

namespace fese {

bool BucketServer::is_pir_frame(FrameType type) {
  switch (type) {
    case FrameType::kQueryDirect:
    case FrameType::kQueryBatch:
    case FrameType::kQueryRestricted:
    case FrameType::kUpdateDirect:
    case FrameType::kUpdateRewrite:
      return true;
    default:
      return false;
  }
}

Frame BucketServer::handle(const Frame& request, const BucketTransform& transform) {
  try {
    if (request.type == FrameType::kUpdateDirect || request.type == FrameType::kUpdateRewrite) {
      std::unique_lock lock(mutex_);
      return handle_locked(request, transform);
    }
    std::shared_lock lock(mutex_);
    return handle_locked(request, transform);
  } catch (const Error& e) {
    return make_error_frame(e.code(), e.what());
  }
}

Frame BucketServer::handle_locked(const Frame& request, const BucketTransform& transform) {
  const auto& shape = store_.shape();
  auto emit = [&](ByteView bucket, Bytes& out) {
    if (transform) {
      Bytes b = transform(bucket);
      require(b.size() == shape.bucket_bytes(), ErrorCode::kProtocol,
              "bucket transform changed the bucket size");
      out.insert(out.end(), b.begin(), b.end());
    } else {
      out.insert(out.end(), bucket.begin(), bucket.end());
    }
  };

  ByteReader r(request.payload);
  switch (request.type) {
    case FrameType::kQueryDirect: {
      BucketIndex alpha = r.u32();
      r.expect_end();
      Frame resp{FrameType::kRespBucket, {}};
      emit(store_.bucket(alpha), resp.payload);
      return resp;
    }
    case FrameType::kQueryRestricted: {
      std::size_t count = r.u16();
      Frame resp{FrameType::kRespBucket, {}};
      resp.payload.reserve(count * shape.bucket_bytes());
      for (std::size_t k = 0; k < count; ++k) emit(store_.bucket(r.u32()), resp.payload);
      r.expect_end();
      return resp;
    }
    case FrameType::kQueryBatch: {
      r.expect_end();
      Frame resp{FrameType::kRespStore, {}};
      resp.payload.reserve(shape.total_bytes());
      for (BucketIndex alpha = 0; alpha < shape.m; ++alpha) emit(store_.bucket(alpha), resp.payload);
      return resp;
    }
    case FrameType::kUpdateDirect: {
      BucketIndex alpha = r.u32();
      std::size_t slot = r.u16();
      auto value = r.raw(r.remaining());
      store_.set_slot(alpha, slot, value);
      return {FrameType::kAck, {}};
    }
    case FrameType::kUpdateRewrite: {
      store_.replace_image(request.payload);
      return {FrameType::kAck, {}};
    }
    default:
      fail(ErrorCode::kProtocol,
           "unexpected frame " + std::string(frame_type_name(request.type)));
  }
}

BucketStore BucketServer::snapshot() const {
  std::shared_lock lock(mutex_);
  return store_;
}

StoreShape BucketServer::shape() const {
  std::shared_lock lock(mutex_);
  return store_.shape();
}

}  // namespace fese
