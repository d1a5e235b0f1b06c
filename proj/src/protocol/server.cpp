#include "fese/protocol/server.hpp"

#include <algorithm>

#include "fese/error.hpp"

namespace fese {

namespace {
constexpr std::uint16_t kIndexVersion = 1;
}

Bytes ServerState::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("FESE"));
  w.u16(kIndexVersion);
  header.serialize(w);
  store.serialize(w);
  w.u32(static_cast<std::uint32_t>(payloads.size()));
  for (const auto& p : payloads) w.blob(p);
  return std::move(w).take();
}

ServerState ServerState::deserialize(ByteView data) {
  ByteReader r(data);
  r.expect_magic("FESE");
  require(r.u16() == kIndexVersion, ErrorCode::kFormat, "unsupported index file version");
  ServerState s;
  s.header = IndexHeader::deserialize(r);
  s.store = BucketStore::deserialize(r);
  const auto& p = s.header.params;
  StoreShape expected{p.m, p.l, 4 * group_for(p.group).element_width()};
  require(s.store.shape() == expected, ErrorCode::kFormat,
          "bucket store shape disagrees with the header");
  std::uint32_t n = r.u32();
  s.payloads.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    auto blob = r.blob();
    s.payloads.emplace_back(blob.begin(), blob.end());
  }
  r.expect_end();
  return s;
}

IndexServer::IndexServer(ServerState state, const Seed& seed)
    : group_(group_for(state.header.params.group)),
      header_(std::move(state.header)),
      header_digest_(header_.digest()),
      buckets_(std::move(state.store)),
      payloads_(std::move(state.payloads)),
      rng_(seed) {}

ServerState IndexServer::snapshot() const {
  ServerState s;
  s.header = header_;
  s.store = buckets_.snapshot();
  std::lock_guard lock(payload_mutex_);
  s.payloads = payloads_;
  return s;
}

Frame IndexServer::handle(const Frame& request, ServerSession& session) {
  try {
    return dispatch(request, session);
  } catch (const Error& e) {
    return make_error_frame(e.code(), e.what());
  }
}

Bytes IndexServer::rerandomize_bucket(ByteView bucket, const ServerSession& session) const {
  const std::size_t width = 4 * group_.element_width();
  Bytes out;
  out.reserve(bucket.size());
  for (std::size_t off = 0; off < bucket.size(); off += width) {
    Slot s = decode_slot(group_, bucket.subspan(off, width));
    s.marker = eg_pow(group_, s.marker, session.c1);
    s.payload = eg_pow(group_, s.payload, session.c2);
    Bytes enc = encode_slot(group_, s);
    out.insert(out.end(), enc.begin(), enc.end());
  }
  return out;
}

Frame IndexServer::dispatch(const Frame& request, ServerSession& session) {
  if (BucketServer::is_pir_frame(request.type)) {
    if (session.rerandomize && request.type != FrameType::kUpdateDirect &&
        request.type != FrameType::kUpdateRewrite) {
      return buckets_.handle(request, [&](ByteView b) { return rerandomize_bucket(b, session); });
    }
    return buckets_.handle(request);
  }

  ByteReader r(request.payload);
  switch (request.type) {
    case FrameType::kHello: {
      auto digest = r.raw(r.remaining());
      require(digest.size() == header_digest_.size() &&
                  std::equal(digest.begin(), digest.end(), header_digest_.begin()),
              ErrorCode::kHeaderMismatch,
              "index header mismatch: client and server were set up with different parameters");
      return {FrameType::kAck, {}};
    }
    case FrameType::kSendInit: {
      r.expect_end();
      // Leaving RETRIEVE mode: sender downloads must see the raw store.
      session.rerandomize = false;
      std::lock_guard lock(payload_mutex_);
      Identifier id = payloads_.size();
      require(id < header_.params.tag_space(), ErrorCode::kProtocol, "identifier space exhausted");
      payloads_.emplace_back();
      ByteWriter w;
      w.u64(id);
      return {FrameType::kSendId, std::move(w).take()};
    }
    case FrameType::kSendPayload: {
      Identifier id = r.u64();
      auto body = r.raw(r.remaining());
      std::lock_guard lock(payload_mutex_);
      require(id < payloads_.size(), ErrorCode::kProtocol, "payload for unassigned identifier");
      require(payloads_[id].empty(), ErrorCode::kProtocol, "payload already stored");
      require(!body.empty(), ErrorCode::kProtocol, "empty payload");
      payloads_[id].assign(body.begin(), body.end());
      return {FrameType::kAck, {}};
    }
    case FrameType::kSendIndex: {
      Identifier id = r.u64();
      r.expect_end();
      std::lock_guard lock(payload_mutex_);
      require(id < payloads_.size(), ErrorCode::kProtocol, "index commit for unassigned identifier");
      return {FrameType::kAck, {}};
    }
    case FrameType::kRetrieveBegin: {
      r.expect_end();
      if (header_.params.mode == SchemeMode::kBase) {
        session.rerandomize = false;
        return {FrameType::kAck, {}};
      }
      {
        std::lock_guard lock(rng_mutex_);
        session.c1 = group_.random_scalar(rng_);
        session.c2 = group_.random_scalar(rng_);
      }
      session.rerandomize = true;
      return {FrameType::kRerandPub, group_.encode(group_.pow_base(session.c2))};
    }
    case FrameType::kFetchPayload: {
      Identifier id = r.u64();
      r.expect_end();
      std::lock_guard lock(payload_mutex_);
      require(id < payloads_.size() && !payloads_[id].empty(), ErrorCode::kIndexInconsistency,
              "no stored record for identifier " + std::to_string(id));
      return {FrameType::kRespPayload, payloads_[id]};
    }
    default:
      fail(ErrorCode::kProtocol,
           "unexpected frame " + std::string(frame_type_name(request.type)));
  }
}

namespace {

class SessionChannel final : public Channel {
 public:
  SessionChannel(IndexServer& server, Transcript* capture) : server_(server), capture_(capture) {}

  Frame exchange(const Frame& request) override {
    if (capture_) capture_->record(Direction::kClientToServer, request);
    Frame reply = server_.handle(request, session_);
    if (capture_) capture_->record(Direction::kServerToClient, reply);
    return reply;
  }

 private:
  IndexServer& server_;
  Transcript* capture_;
  ServerSession session_;
};

}  // namespace

std::unique_ptr<Channel> IndexServer::connect(Transcript* capture) {
  return std::make_unique<SessionChannel>(*this, capture);
}

}  // namespace fese
