#include "fese/protocol/views.hpp"

#include <algorithm>
#include <map>

#include "fese/crypto/elgamal.hpp"
#include "fese/crypto/shares.hpp"
#include "fese/error.hpp"

namespace fese {

Transcript capture_send_view(const ServerState& state, const PublicBundle& pub,
                             const SlotAllocator& allocator, const BinaryTemplate& x,
                             const Seed& sender_seed, const Seed& server_seed) {
  IndexServer server(state, server_seed);
  Transcript view;
  auto channel = server.connect(&view);
  Sender sender(pub, allocator, sender_seed);
  sender.send(*channel, x);
  return view;
}

Transcript capture_retrieve_view(const ServerState& state, const SecretBundle& sec,
                                 const BinaryTemplate& x, const Seed& server_seed) {
  IndexServer server(state, server_seed);
  Transcript view;
  auto channel = server.connect(&view);
  Receiver receiver(sec);
  receiver.retrieve(*channel, x);
  return view;
}

SimulatorServer::SimulatorServer(PublicBundle pub, std::vector<Identifier> tags,
                                 const Seed& seed)
    : pub_(std::move(pub)), group_(pub_.group()), tags_(std::move(tags)), rng_(seed) {}

Frame SimulatorServer::handle(const Frame& request) {
  try {
    ByteReader r(request.payload);
    switch (request.type) {
      case FrameType::kHello:
        return {FrameType::kAck, {}};
      case FrameType::kRetrieveBegin:
        r.expect_end();
        c2_ = group_.random_scalar(rng_);
        begun_ = true;
        return {FrameType::kRerandPub, group_.encode(group_.pow_base(c2_))};
      case FrameType::kQueryRestricted:
        require(begun_, ErrorCode::kProtocol, "query before RETRIEVE_BEGIN");
        return answer_restricted(r);
      default:
        fail(ErrorCode::kProtocol,
             "simulator does not answer " + std::string(frame_type_name(request.type)));
    }
  } catch (const Error& e) {
    return make_error_frame(e.code(), e.what());
  }
}

Frame SimulatorServer::answer_restricted(ByteReader& r) {
  const auto& p = pub_.params;
  const std::size_t count = r.u16();
  std::vector<BucketIndex> idx;
  for (std::size_t k = 0; k < count; ++k) idx.push_back(r.u32());
  r.expect_end();

  std::map<BucketIndex, std::vector<Slot>> buckets;
  for (BucketIndex a : idx) buckets.emplace(a, std::vector<Slot>{});
  for (Identifier tag : tags_) {
    const GroupElement z = group_.random_element(rng_);
    TagShareSet shares =
        raise_shares(group_, split_secret(group_, tag, idx.size(), p.tag_bits, rng_), c2_);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Slot s{eg_encrypt(group_, pub_.elgamal_pub, z, rng_),
             eg_encrypt(group_, pub_.elgamal_pub, shares.shares[k], rng_)};
      buckets[idx[k]].push_back(s);
    }
  }

  const StoreShape shape{p.m, p.l, slot_width(group_)};
  std::map<BucketIndex, Bytes> encoded;
  for (auto& [alpha, slots] : buckets) {
    require(slots.size() <= p.l, ErrorCode::kOverflow, "simulated bucket overflow");
    while (slots.size() < p.l)
      slots.push_back({eg_encrypt(group_, pub_.elgamal_pub, group_.random_element(rng_), rng_),
                       eg_encrypt(group_, pub_.elgamal_pub, group_.random_element(rng_), rng_)});
    std::shuffle(slots.begin(), slots.end(), rng_);
    Bytes b;
    b.reserve(shape.bucket_bytes());
    for (const Slot& s : slots) {
      Bytes e = encode_slot(group_, s);
      b.insert(b.end(), e.begin(), e.end());
    }
    encoded.emplace(alpha, std::move(b));
  }

  Frame resp{FrameType::kRespBucket, {}};
  for (BucketIndex a : idx) resp.payload.insert(resp.payload.end(), encoded[a].begin(), encoded[a].end());
  return resp;
}

MarkerProducts open_client_view(const Transcript& view, const SecretBundle& sec,
                                const std::vector<BucketIndex>& idx) {
  const Group& group = sec.pub.group();
  const StoreShape shape{sec.pub.params.m, sec.pub.params.l, slot_width(group)};
  MarkerProducts out;
  Bytes stream;
  bool have_pub = false;
  for (const auto& [dir, bytes] : view.entries) {
    if (dir != Direction::kServerToClient) continue;
    Frame f = decode_frame(bytes);
    if (f.type == FrameType::kRerandPub) {
      out.rerand_pub = group.decode(f.payload);
      have_pub = true;
    } else if (f.type == FrameType::kRespBucket) {
      stream.insert(stream.end(), f.payload.begin(), f.payload.end());
    }
  }
  require(have_pub, ErrorCode::kProtocol, "view has no RERAND_PUB frame");
  require(stream.size() == idx.size() * shape.bucket_bytes(), ErrorCode::kProtocol,
          "view does not hold one bucket per queried index");

  // marker -> (distinct buckets carrying it, product of paired plaintexts)
  std::map<GroupElement, std::pair<std::size_t, GroupElement>> acc;
  std::vector<BucketIndex> seen;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (std::find(seen.begin(), seen.end(), idx[k]) != seen.end()) continue;
    seen.push_back(idx[k]);
    std::map<GroupElement, GroupElement> local;
    for (std::size_t s = 0; s < shape.l; ++s) {
      auto off = (k * shape.l + s) * shape.slot_width;
      Slot slot = decode_slot(group, ByteView(stream).subspan(off, shape.slot_width));
      GroupElement z = eg_decrypt(group, sec.secret, slot.marker);
      GroupElement b = eg_decrypt(group, sec.secret, slot.payload);
      auto [it, fresh] = local.emplace(z, b);
      if (!fresh) it->second = group.mul(it->second, b);
    }
    for (const auto& [z, b] : local) {
      auto [it, fresh] = acc.emplace(z, std::make_pair(std::size_t{1}, b));
      if (!fresh) {
        ++it->second.first;
        it->second.second = group.mul(it->second.second, b);
      }
    }
  }
  for (const auto& [z, entry] : acc)
    (entry.first == seen.size() ? out.matched : out.unmatched).push_back(entry.second);
  return out;
}

}  // namespace fese
