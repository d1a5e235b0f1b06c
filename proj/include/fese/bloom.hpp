#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fese/bytes.hpp"
#include "fese/lsh.hpp"
#include "fese/templates.hpp"

namespace fese {

using BucketIndex = std::uint32_t;  ///< 0-based bucket number in [0, m)
using HashKey = std::array<std::uint8_t, 32>;

/// The nu Bloom hash functions h'_j : bytes -> [0, m): keyed BLAKE2b over
/// u16(j) || y, 64-bit output reduced modulo m.
class BloomHasher {
 public:
  BloomHasher() = default;
  BloomHasher(const HashKey& key, std::size_t nu, std::size_t m);

  BucketIndex hash(std::size_t j, ByteView y) const;

  std::size_t nu() const { return nu_; }
  std::size_t m() const { return m_; }
  const HashKey& key() const { return key_; }
  /// 16-byte digest of the key, safe to publish in index headers.
  Bytes key_fingerprint() const;

 private:
  HashKey key_{};
  std::size_t nu_ = 0;
  std::size_t m_ = 0;
};

/// The mu*nu composite functions h^c_{(j,i)}(x) = h'_j(h_i(x) || u16(i)).
class CompositeFamily {
 public:
  CompositeFamily() = default;
  CompositeFamily(LshFamily lsh, BloomHasher bloom);

  BucketIndex eval(std::size_t j, std::size_t i, const BinaryTemplate& x) const;
  /// All mu*nu bucket indices, function i major and j minor: entry i*nu + j.
  std::vector<BucketIndex> eval_all(const BinaryTemplate& x) const;

  std::size_t size() const { return lsh_.mu() * bloom_.nu(); }
  std::size_t mu() const { return lsh_.mu(); }
  std::size_t nu() const { return bloom_.nu(); }
  std::size_t m() const { return bloom_.m(); }
  const LshFamily& lsh() const { return lsh_; }
  const BloomHasher& bloom() const { return bloom_; }

 private:
  static Bytes bloom_input(const LshDigest& digest, std::size_t i);

  LshFamily lsh_;
  BloomHasher bloom_;
};

struct Tag {
  std::uint64_t value = 0;
  friend auto operator<=>(const Tag&, const Tag&) = default;
};

/// Number of whole LSH groups a match must cover for threshold tau.
inline std::size_t required_groups(std::size_t tau, std::size_t nu) {
  return (tau + nu - 1) / nu;
}

/// Items present in all nu sets of at least ceil(tau/nu) groups. `sets` holds
/// one sorted, duplicate-free set per composite function, ordered i*nu + j.
/// With tau = mu*nu this is the plain intersection of every set.
template <class T>
std::vector<T> grouped_threshold_match(const std::vector<std::vector<T>>& sets,
                                       std::size_t nu, std::size_t tau) {
  const std::size_t mu = sets.size() / nu;
  const std::size_t need = required_groups(tau, nu);
  std::vector<T> hits;
  for (std::size_t i = 0; i < mu; ++i) {
    std::vector<T> group = sets[i * nu];
    for (std::size_t j = 1; j < nu && !group.empty(); ++j) {
      std::vector<T> next;
      std::set_intersection(group.begin(), group.end(), sets[i * nu + j].begin(),
                            sets[i * nu + j].end(), std::back_inserter(next));
      group = std::move(next);
    }
    hits.insert(hits.end(), group.begin(), group.end());
  }
  std::sort(hits.begin(), hits.end());
  std::vector<T> out;
  for (std::size_t a = 0; a < hits.size();) {
    std::size_t b = a;
    while (b < hits.size() && hits[b] == hits[a]) ++b;
    if (b - a >= need) out.push_back(hits[a]);
    a = b;
  }
  return out;
}

/// Bloom filter with storage: m buckets holding sets of tags. Capacity 0
/// means unbounded; otherwise inserting into a full bucket throws kOverflow.
class BfsStructure {
 public:
  explicit BfsStructure(std::size_t m, std::size_t capacity = 0);

  std::size_t m() const { return buckets_.size(); }
  const std::vector<Tag>& bucket(BucketIndex alpha) const;

  /// Adds tag to bucket alpha; no-op if already present.
  void insert(BucketIndex alpha, Tag tag);
  /// Adds tag to every listed bucket. Capacity is checked for all buckets
  /// before anything is modified.
  void add(std::span<const BucketIndex> indices, Tag tag);
  void add(const CompositeFamily& comp, const BinaryTemplate& x, Tag tag);

  /// Tags found under the grouped threshold rule for the given indices
  /// (ordered like CompositeFamily::eval_all).
  std::vector<Tag> lookup(std::span<const BucketIndex> indices, std::size_t nu,
                          std::size_t tau) const;
  std::vector<Tag> lookup(const CompositeFamily& comp, const BinaryTemplate& x,
                          std::size_t tau) const;

  /// Plain Bloom membership: every addressed bucket is non-empty.
  bool contains(std::span<const BucketIndex> indices) const;

  friend bool operator==(const BfsStructure&, const BfsStructure&) = default;

 private:
  std::vector<std::vector<Tag>> buckets_;
  std::size_t capacity_;
};

/// (1 - (1 - nu/m)^d)^nu, the Bloom false-positive probability.
double fp_probability(std::size_t nu, std::size_t m, std::size_t d_size);

struct IndexBounds {
  double soundness = 0;             ///< (eps2 + (1 - eps2)/m)^|Hc|
  double completeness_failure = 0;  ///< 1 - (1 - eps1)^|Hc|
};

IndexBounds index_bounds(double eps1, double eps2, std::size_t m, std::size_t hc_size);

}  // namespace fese
