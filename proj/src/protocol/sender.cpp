#include "fese/crypto/elgamal.hpp"
#include "fese/crypto/payload.hpp"
#include "fese/crypto/shares.hpp"
#include "fese/error.hpp"
#include "fese/pir/pir_client.hpp"
#include "fese/protocol/client.hpp"

namespace fese {

OpCounters& OpCounters::operator+=(const OpCounters& o) {
  hash_evals += o.hash_evals;
  encryptions += o.encryptions;
  decryptions += o.decryptions;
  cached_decryptions += o.cached_decryptions;
  dlog_solves += o.dlog_solves;
  frames += o.frames;
  bytes_sent += o.bytes_sent;
  bytes_received += o.bytes_received;
  return *this;
}

Frame CountingChannel::exchange(const Frame& request) {
  ++counters_.frames;
  counters_.bytes_sent += kFrameHeaderSize + request.payload.size();
  Frame reply = inner_.exchange(request);
  counters_.bytes_received += kFrameHeaderSize + reply.payload.size();
  return reply;
}

void handshake(Channel& channel, const IndexHeader& header) {
  call(channel, {FrameType::kHello, header.digest()}, FrameType::kAck);
}

namespace {

Identifier read_identifier(const Frame& frame) {
  ByteReader r(frame.payload);
  Identifier id = r.u64();
  r.expect_end();
  return id;
}

Frame id_frame(FrameType type, Identifier id, ByteView tail = {}) {
  ByteWriter w;
  w.u64(id);
  w.raw(tail);
  return {type, std::move(w).take()};
}

}  // namespace

Sender::Sender(PublicBundle pub, SlotAllocator allocator, const Seed& seed)
    : pub_(std::move(pub)),
      group_(pub_.group()),
      comp_(pub_.composite()),
      allocator_(std::move(allocator)),
      rng_(seed) {
  require(allocator_.m() == pub_.params.m && allocator_.capacity() == pub_.params.l,
          ErrorCode::kHeaderMismatch, "slot allocator does not match the public parameters");
}

std::vector<SlotWrite> Sender::base_entries(Identifier id, const std::vector<BucketIndex>& idx,
                                            const std::vector<std::size_t>& slots) {
  const GroupElement tag = group_.pow_base(group_.scalar_from_u64(id));
  std::vector<SlotWrite> writes;
  writes.reserve(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    Slot s;
    s.marker = eg_encrypt(group_, pub_.elgamal_pub, group_.random_element(rng_), rng_);
    s.payload = eg_encrypt(group_, pub_.elgamal_pub, tag, rng_);
    counters_.encryptions += 2;
    writes.push_back({idx[k], slots[k], encode_slot(group_, s)});
  }
  return writes;
}

std::vector<SlotWrite> Sender::extended_entries(Identifier id,
                                                const std::vector<BucketIndex>& idx,
                                                const std::vector<std::size_t>& slots) {
  const GroupElement marker = group_.pow(group_.second_generator(), group_.random_scalar(rng_));
  TagShareSet shares = split_secret(group_, id, idx.size(), pub_.params.tag_bits, rng_);
  std::vector<SlotWrite> writes;
  writes.reserve(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    Slot s;
    s.marker = eg_encrypt(group_, pub_.elgamal_pub, marker, rng_);
    s.payload = eg_encrypt(group_, pub_.elgamal_pub, shares.shares[k], rng_);
    counters_.encryptions += 2;
    writes.push_back({idx[k], slots[k], encode_slot(group_, s)});
  }
  return writes;
}

Identifier Sender::send(Channel& channel, const BinaryTemplate& x) {
  require(x.size() == pub_.params.n_bits, ErrorCode::kDimension,
          "template has " + std::to_string(x.size()) + " bits, expected " +
              std::to_string(pub_.params.n_bits));
  const std::vector<BucketIndex> idx = comp_.eval_all(x);
  counters_.hash_evals += idx.size();
  SlotAllocator next = allocator_;
  const std::vector<std::size_t> slots = next.reserve(idx);

  CountingChannel ch(channel, counters_);
  const Identifier id = read_identifier(call(ch, {FrameType::kSendInit, {}}, FrameType::kSendId));

  Bytes payload = payload_encrypt(group_, pub_.elgamal_pub, x.packed(), rng_);
  call(ch, id_frame(FrameType::kSendPayload, id, payload), FrameType::kAck);

  std::vector<SlotWrite> writes = pub_.params.mode == SchemeMode::kBase
                                      ? base_entries(id, idx, slots)
                                      : extended_entries(id, idx, slots);
  if (pub_.params.update == UpdateTransport::kDirect) {
    for (const auto& w : writes) pis_update_direct(ch, w);
  } else {
    const StoreShape shape{pub_.params.m, pub_.params.l, slot_width(group_)};
    pis_update_rewrite(ch, shape, writes, [&](Bytes& image) {
      rerandomize_image(group_, pub_.elgamal_pub, shape, image, rng_);
      counters_.encryptions += 2 * shape.m * shape.l;
    });
  }

  call(ch, id_frame(FrameType::kSendIndex, id), FrameType::kAck);
  allocator_ = std::move(next);
  return id;
}

}  // namespace fese
