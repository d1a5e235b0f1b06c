#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fese/crypto/group.hpp"

namespace fese {

/// Baby-step giant-step over [0, bound), run in rounds: round r tabulates
/// B_r baby steps (B doubling each round, up to ceil(sqrt(bound))) and covers
/// exponents below B_r^2. Small answers are therefore found in O(sqrt(s))
/// group operations; the worst case stays O(sqrt(bound)). The table is kept
/// between calls. Not thread-safe.
class DiscreteLogSolver {
 public:
  /// Throws kParameter when bound is zero.
  DiscreteLogSolver(const Group& group, const GroupElement& base, std::uint64_t bound);

  /// s in [0, bound) with base^s == target, or nullopt.
  std::optional<std::uint64_t> solve(const GroupElement& target);

  const GroupElement& base() const { return base_; }
  std::uint64_t bound() const { return bound_; }
  /// Baby steps tabulated so far.
  std::uint64_t table_size() const { return powers_.size(); }

 private:
  void grow_to(std::uint64_t steps);

  const Group* group_;
  GroupElement base_;
  std::uint64_t bound_;
  std::uint64_t max_baby_;
  std::vector<GroupElement> powers_;  ///< base^0 .. base^{B-1}
  std::unordered_map<GroupElement, std::uint64_t, GroupElementHash> table_;
};

std::optional<std::uint64_t> discrete_log_small(const Group& group, const GroupElement& base,
                                                const GroupElement& target, std::uint64_t bound);

}  // namespace fese
