#include "fese/crypto/dlog.hpp"

#include <algorithm>
#include <cmath>

#include "fese/error.hpp"

namespace fese {

namespace {
constexpr std::uint64_t kFirstRound = 16;
}

DiscreteLogSolver::DiscreteLogSolver(const Group& group, const GroupElement& base,
                                     std::uint64_t bound)
    : group_(&group), base_(base), bound_(bound) {
  require(bound >= 1, ErrorCode::kParameter, "discrete log bound must be at least 1");
  max_baby_ = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(bound))));
  while (max_baby_ * max_baby_ < bound) ++max_baby_;
  while (max_baby_ > 1 && (max_baby_ - 1) * (max_baby_ - 1) >= bound) --max_baby_;
}

void DiscreteLogSolver::grow_to(std::uint64_t steps) {
  if (powers_.empty()) {
    powers_.push_back(group_->identity());
    table_.emplace(powers_.back(), 0);
  }
  powers_.reserve(steps);
  while (powers_.size() < steps) {
    GroupElement next = group_->mul(powers_.back(), base_);
    table_.emplace(next, powers_.size());
    powers_.push_back(next);
  }
}

std::optional<std::uint64_t> DiscreteLogSolver::solve(const GroupElement& target) {
  std::uint64_t covered = 0;
  std::uint64_t steps = std::min(kFirstRound, max_baby_);
  for (;;) {
    steps = std::max<std::uint64_t>(steps, std::min<std::uint64_t>(powers_.size(), max_baby_));
    grow_to(steps);
    const std::uint64_t limit =
        steps >= max_baby_ ? bound_ : std::min(bound_, steps * steps);
    // base^{-steps}
    const GroupElement stride = group_->inverse(group_->mul(powers_[steps - 1], base_));
    std::uint64_t k = covered / steps;
    GroupElement gamma =
        k == 0 ? target
               : group_->mul(target, group_->inverse(group_->pow(base_, group_->scalar_from_u64(
                                                                           k * steps))));
    for (; k * steps < limit; ++k) {
      if (auto it = table_.find(gamma); it != table_.end()) {
        const std::uint64_t s = k * steps + it->second;
        return s < bound_ ? std::optional<std::uint64_t>(s) : std::nullopt;
      }
      gamma = group_->mul(gamma, stride);
    }
    covered = limit;
    if (covered >= bound_) return std::nullopt;
    steps = std::min(steps * 2, max_baby_);
  }
}

std::optional<std::uint64_t> discrete_log_small(const Group& group, const GroupElement& base,
                                                const GroupElement& target, std::uint64_t bound) {
  return DiscreteLogSolver(group, base, bound).solve(target);
}

}  // namespace fese
