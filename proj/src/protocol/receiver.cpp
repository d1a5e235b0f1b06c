#include <algorithm>
#include <map>

#include "fese/crypto/elgamal.hpp"
#include "fese/crypto/payload.hpp"
#include "fese/error.hpp"
#include "fese/pir/pir_client.hpp"
#include "fese/protocol/client.hpp"

namespace fese {

namespace {

using ElementSet = std::vector<GroupElement>;

constexpr std::size_t kPayloadMemoLimit = std::size_t{1} << 18;

void normalize(ElementSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

ElementSet intersect(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Bucket positions in first-occurrence order, without repeats.
std::vector<std::size_t> distinct_positions(const std::vector<BucketIndex>& idx) {
  std::vector<std::size_t> out;
  std::vector<BucketIndex> seen;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (std::find(seen.begin(), seen.end(), idx[k]) != seen.end()) continue;
    seen.push_back(idx[k]);
    out.push_back(k);
  }
  return out;
}

}  // namespace

Receiver::Receiver(SecretBundle sec)
    : sec_(std::move(sec)),
      group_(sec_.pub.group()),
      comp_(sec_.pub.composite()),
      shape_{sec_.pub.params.m, sec_.pub.params.l, slot_width(group_)} {}

std::vector<Slot> Receiver::decode_bucket(const Bytes& bucket) const {
  require(bucket.size() == shape_.bucket_bytes(), ErrorCode::kTransport,
          "bucket has " + std::to_string(bucket.size()) + " bytes, expected " +
              std::to_string(shape_.bucket_bytes()));
  std::vector<Slot> slots;
  slots.reserve(shape_.l);
  for (std::size_t k = 0; k < shape_.l; ++k)
    slots.push_back(decode_slot(group_, ByteView(bucket).subspan(k * shape_.slot_width,
                                                                 shape_.slot_width)));
  return slots;
}

Identifier Receiver::tag_of(DiscreteLogSolver& solver, const GroupElement& e) {
  ++counters_.dlog_solves;
  auto s = solver.solve(e);
  require(s.has_value(), ErrorCode::kCorruptShare,
          "tag candidate has no discrete log below 2^" +
              std::to_string(sec_.pub.params.tag_bits));
  return *s;
}

std::vector<Identifier> Receiver::retrieve(Channel& channel, const BinaryTemplate& x) {
  const auto& p = sec_.pub.params;
  require(x.size() == p.n_bits, ErrorCode::kDimension,
          "template has " + std::to_string(x.size()) + " bits, expected " +
              std::to_string(p.n_bits));
  const std::vector<BucketIndex> idx = comp_.eval_all(x);
  counters_.hash_evals += idx.size();

  CountingChannel ch(channel, counters_);
  if (p.mode == SchemeMode::kBase) {
    call(ch, {FrameType::kRetrieveBegin, {}}, FrameType::kAck);
    auto buckets = pir_query_many(ch, p.query, shape_, idx);
    return retrieve_base(idx, buckets);
  }
  Frame pub = call(ch, {FrameType::kRetrieveBegin, {}}, FrameType::kRerandPub);
  GroupElement base = group_.decode(pub.payload);
  auto buckets = pir_query_many(ch, p.query, shape_, idx);
  return retrieve_extended(idx, buckets, base);
}

std::vector<Identifier> Receiver::retrieve_base(const std::vector<BucketIndex>& idx,
                                                const std::vector<Bytes>& buckets) {
  const auto& p = sec_.pub.params;
  std::map<BucketIndex, ElementSet> cache;
  auto tags_in = [&](std::size_t k) -> const ElementSet& {
    auto it = cache.find(idx[k]);
    if (it != cache.end()) return it->second;
    require(buckets[k].size() == shape_.bucket_bytes(), ErrorCode::kTransport,
            "bucket has " + std::to_string(buckets[k].size()) + " bytes, expected " +
                std::to_string(shape_.bucket_bytes()));
    ElementSet s;
    const std::size_t half = shape_.slot_width / 2;
    for (std::size_t n = 0; n < shape_.l; ++n) {
      auto bytes = ByteView(buckets[k]).subspan(n * shape_.slot_width + half, half);
      std::string key(bytes.begin(), bytes.end());
      if (auto hit = payload_memo_.find(key); hit != payload_memo_.end()) {
        s.push_back(hit->second);
        ++counters_.cached_decryptions;
        continue;
      }
      ByteReader r(bytes);
      GroupElement e = eg_decrypt(group_, sec_.secret, decode_ciphertext(group_, r));
      ++counters_.decryptions;
      if (payload_memo_.size() >= kPayloadMemoLimit) payload_memo_.clear();
      payload_memo_.emplace(std::move(key), e);
      s.push_back(e);
    }
    normalize(s);
    return cache.emplace(idx[k], std::move(s)).first->second;
  };

  ElementSet found;
  if (p.full_intersection()) {
    auto order = distinct_positions(idx);
    found = tags_in(order[0]);
    for (std::size_t n = 1; n < order.size() && !found.empty(); ++n)
      found = intersect(found, tags_in(order[n]));
  } else {
    std::vector<ElementSet> groups;
    for (std::size_t i = 0; i < p.mu; ++i) {
      ElementSet g = tags_in(i * p.nu);
      for (std::size_t j = 1; j < p.nu && !g.empty(); ++j) g = intersect(g, tags_in(i * p.nu + j));
      groups.push_back(std::move(g));
    }
    std::map<GroupElement, std::size_t> hits;
    for (const auto& g : groups)
      for (const auto& e : g) ++hits[e];
    const std::size_t need = required_groups(p.threshold(), p.nu);
    for (const auto& [e, count] : hits)
      if (count >= need) found.push_back(e);
  }

  std::vector<Identifier> out;
  for (const auto& e : found) {
    auto memo = base_memo_.find(e);
    if (memo != base_memo_.end()) {
      out.push_back(memo->second);
      continue;
    }
    if (!base_solver_)
      base_solver_ = std::make_unique<DiscreteLogSolver>(group_, group_.generator(), p.tag_space());
    Identifier id = tag_of(*base_solver_, e);
    base_memo_.emplace(e, id);
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Identifier> Receiver::retrieve_extended(const std::vector<BucketIndex>& idx,
                                                    const std::vector<Bytes>& buckets,
                                                    const GroupElement& base) {
  const auto& p = sec_.pub.params;
  struct Opened {
    std::vector<Slot> slots;
    std::vector<GroupElement> markers;
  };
  std::vector<Opened> opened;
  ElementSet common;
  for (std::size_t k : distinct_positions(idx)) {
    Opened o{decode_bucket(buckets[k]), {}};
    for (const Slot& s : o.slots) {
      o.markers.push_back(eg_decrypt(group_, sec_.secret, s.marker));
      ++counters_.decryptions;
    }
    ElementSet here = o.markers;
    normalize(here);
    common = opened.empty() ? std::move(here) : intersect(common, here);
    opened.push_back(std::move(o));
    if (common.empty()) return {};
  }

  DiscreteLogSolver solver(group_, base, p.tag_space());
  std::vector<Identifier> out;
  for (const auto& z : common) {
    GroupElement product = group_.identity();
    for (const Opened& o : opened) {
      for (std::size_t k = 0; k < o.slots.size(); ++k) {
        if (o.markers[k] != z) continue;
        product = group_.mul(product, eg_decrypt(group_, sec_.secret, o.slots[k].payload));
        ++counters_.decryptions;
      }
    }
    out.push_back(tag_of(solver, product));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Bytes Receiver::fetch_payload(Channel& channel, Identifier id) {
  CountingChannel ch(channel, counters_);
  ByteWriter w;
  w.u64(id);
  Frame reply = call(ch, {FrameType::kFetchPayload, std::move(w).take()}, FrameType::kRespPayload);
  ++counters_.decryptions;
  return payload_decrypt(group_, sec_.secret, reply.payload);
}

BinaryTemplate Receiver::fetch_template(Channel& channel, Identifier id) {
  Bytes packed = fetch_payload(channel, id);
  const std::size_t n = sec_.pub.params.n_bits;
  require(packed.size() == (n + 7) / 8, ErrorCode::kFormat,
          "stored payload for identifier " + std::to_string(id) + " is not an " +
              std::to_string(n) + "-bit template");
  return BinaryTemplate::from_packed(n, packed);
}

}  // namespace fese
