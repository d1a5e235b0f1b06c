#include "fese/bloom.hpp"

#include <sodium.h>

#include <cmath>

#include "fese/error.hpp"

namespace fese {

BloomHasher::BloomHasher(const HashKey& key, std::size_t nu, std::size_t m)
    : key_(key), nu_(nu), m_(m) {
  require(nu >= 1 && nu <= 65535, ErrorCode::kParameter, "Bloom hash count must lie in [1, 65535]");
  require(m >= 1 && m <= 0xffffffffu, ErrorCode::kParameter, "bucket count must be positive");
}

BucketIndex BloomHasher::hash(std::size_t j, ByteView y) const {
  require(j < nu_, ErrorCode::kParameter, "Bloom hash index out of range");
  crypto_generichash_state st;
  crypto_generichash_init(&st, key_.data(), key_.size(), 8);
  const std::uint8_t prefix[2] = {static_cast<std::uint8_t>(j >> 8),
                                  static_cast<std::uint8_t>(j)};
  crypto_generichash_update(&st, prefix, sizeof prefix);
  crypto_generichash_update(&st, y.data(), y.size());
  std::uint8_t out[8];
  crypto_generichash_final(&st, out, sizeof out);
  std::uint64_t v = 0;
  for (auto b : out) v = (v << 8) | b;
  return static_cast<BucketIndex>(v % m_);
}

Bytes BloomHasher::key_fingerprint() const {
  static constexpr std::string_view kLabel = "fese/bloom-key-fingerprint";
  Bytes in(kLabel.begin(), kLabel.end());
  in.insert(in.end(), key_.begin(), key_.end());
  return digest(in, 16);
}

CompositeFamily::CompositeFamily(LshFamily lsh, BloomHasher bloom)
    : lsh_(std::move(lsh)), bloom_(bloom) {
  require(lsh_.mu() <= 65536, ErrorCode::kParameter, "at most 65536 LSH functions");
}

Bytes CompositeFamily::bloom_input(const LshDigest& digest, std::size_t i) {
  Bytes y = digest;
  y.push_back(static_cast<std::uint8_t>(i >> 8));
  y.push_back(static_cast<std::uint8_t>(i));
  return y;
}

BucketIndex CompositeFamily::eval(std::size_t j, std::size_t i, const BinaryTemplate& x) const {
  return bloom_.hash(j, bloom_input(lsh_.eval(i, x), i));
}

std::vector<BucketIndex> CompositeFamily::eval_all(const BinaryTemplate& x) const {
  std::vector<BucketIndex> out;
  out.reserve(size());
  for (std::size_t i = 0; i < lsh_.mu(); ++i) {
    Bytes y = bloom_input(lsh_.eval(i, x), i);
    for (std::size_t j = 0; j < bloom_.nu(); ++j) out.push_back(bloom_.hash(j, y));
  }
  return out;
}

BfsStructure::BfsStructure(std::size_t m, std::size_t capacity)
    : buckets_(m), capacity_(capacity) {
  require(m >= 1, ErrorCode::kParameter, "bucket count must be positive");
}

const std::vector<Tag>& BfsStructure::bucket(BucketIndex alpha) const {
  require(alpha < buckets_.size(), ErrorCode::kParameter, "bucket index out of range");
  return buckets_[alpha];
}

void BfsStructure::insert(BucketIndex alpha, Tag tag) {
  require(alpha < buckets_.size(), ErrorCode::kParameter, "bucket index out of range");
  auto& b = buckets_[alpha];
  auto it = std::lower_bound(b.begin(), b.end(), tag);
  if (it != b.end() && *it == tag) return;
  if (capacity_ != 0 && b.size() >= capacity_) {
    fail(ErrorCode::kOverflow, "bucket " + std::to_string(alpha) + " is full (capacity " +
                                   std::to_string(capacity_) + ")");
  }
  b.insert(it, tag);
}

void BfsStructure::add(std::span<const BucketIndex> indices, Tag tag) {
  if (capacity_ != 0) {
    std::vector<BucketIndex> fresh;
    for (auto alpha : indices) {
      const auto& b = bucket(alpha);
      if (!std::binary_search(b.begin(), b.end(), tag)) fresh.push_back(alpha);
    }
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    for (auto alpha : fresh) {
      if (buckets_[alpha].size() >= capacity_) {
        fail(ErrorCode::kOverflow, "bucket " + std::to_string(alpha) + " is full (capacity " +
                                       std::to_string(capacity_) + ")");
      }
    }
  }
  for (auto alpha : indices) insert(alpha, tag);
}

void BfsStructure::add(const CompositeFamily& comp, const BinaryTemplate& x, Tag tag) {
  require(comp.m() == m(), ErrorCode::kParameter, "family and structure disagree on m");
  auto idx = comp.eval_all(x);
  add(idx, tag);
}

std::vector<Tag> BfsStructure::lookup(std::span<const BucketIndex> indices, std::size_t nu,
                                      std::size_t tau) const {
  require(nu >= 1 && indices.size() % nu == 0, ErrorCode::kParameter,
          "index list is not a whole number of LSH groups");
  require(tau >= 1 && tau <= indices.size(), ErrorCode::kParameter,
          "threshold must lie in [1, mu*nu]");
  std::vector<std::vector<Tag>> sets;
  sets.reserve(indices.size());
  for (auto alpha : indices) sets.push_back(bucket(alpha));
  return grouped_threshold_match(sets, nu, tau);
}

std::vector<Tag> BfsStructure::lookup(const CompositeFamily& comp, const BinaryTemplate& x,
                                      std::size_t tau) const {
  require(comp.m() == m(), ErrorCode::kParameter, "family and structure disagree on m");
  auto idx = comp.eval_all(x);
  return lookup(idx, comp.nu(), tau);
}

bool BfsStructure::contains(std::span<const BucketIndex> indices) const {
  return std::all_of(indices.begin(), indices.end(),
                     [&](BucketIndex alpha) { return !bucket(alpha).empty(); });
}

double fp_probability(std::size_t nu, std::size_t m, std::size_t d_size) {
  require(m >= 1 && nu <= m, ErrorCode::kParameter, "fp_probability needs nu <= m");
  const double nu_d = static_cast<double>(nu);
  const double empty = std::pow(1.0 - nu_d / static_cast<double>(m), static_cast<double>(d_size));
  return std::pow(1.0 - empty, nu_d);
}

IndexBounds index_bounds(double eps1, double eps2, std::size_t m, std::size_t hc_size) {
  require(eps1 >= 0.0 && eps1 <= 1.0 && eps2 >= 0.0 && eps2 <= 1.0, ErrorCode::kParameter,
          "eps1 and eps2 must be probabilities");
  require(m >= 1, ErrorCode::kParameter, "bucket count must be positive");
  const double n = static_cast<double>(hc_size);
  return {std::pow(eps2 + (1.0 - eps2) / static_cast<double>(m), n),
          1.0 - std::pow(1.0 - eps1, n)};
}

}  // namespace fese
