#include "fese/crypto/shares.hpp"

#include "fese/error.hpp"

namespace fese {

TagShareSet split_secret(const Group& group, std::uint64_t s, std::size_t n,
                         unsigned tag_bits, Drbg& rng) {
  require(n >= 2, ErrorCode::kParameter, "secret splitting needs at least two shares");
  require(tag_bits >= 1 && tag_bits <= 62, ErrorCode::kParameter, "tag_bits must lie in [1, 62]");
  require(s < (std::uint64_t{1} << tag_bits), ErrorCode::kParameter,
          "secret exceeds the tag space");
  TagShareSet out;
  out.shares.reserve(n);
  Scalar sum{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Scalar r = group.random_scalar(rng);
    sum = group.scalar_add(sum, r);
    out.shares.push_back(group.pow_base(r));
  }
  Scalar last = group.scalar_add(group.scalar_neg(sum), group.scalar_from_u64(s));
  out.shares.push_back(group.pow_base(last));
  return out;
}

GroupElement combine_shares(const Group& group, const std::vector<GroupElement>& shares) {
  GroupElement acc = group.identity();
  for (const auto& a : shares) acc = group.mul(acc, a);
  return acc;
}

TagShareSet raise_shares(const Group& group, const TagShareSet& set, const Scalar& t) {
  TagShareSet out;
  out.shares.reserve(set.size());
  for (const auto& a : set.shares) out.shares.push_back(group.pow(a, t));
  return out;
}

}  // namespace fese
