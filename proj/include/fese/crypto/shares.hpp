#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fese/crypto/group.hpp"
#include "fese/random.hpp"

namespace fese {

/// Multiplicative split of a small secret s: A_1..A_{n-1} = g^{r_i},
/// A_n = g^{s - sum r_i}, so the product of all shares is g^s. Raising every
/// share to the same t re-randomizes the split; the product becomes (g^t)^s.
struct TagShareSet {
  std::vector<GroupElement> shares;
  std::size_t size() const { return shares.size(); }
};

/// Throws kParameter when n < 2 or s >= 2^tag_bits.
TagShareSet split_secret(const Group& group, std::uint64_t s, std::size_t n,
                         unsigned tag_bits, Drbg& rng);

GroupElement combine_shares(const Group& group, const std::vector<GroupElement>& shares);

TagShareSet raise_shares(const Group& group, const TagShareSet& set, const Scalar& t);

}  // namespace fese
