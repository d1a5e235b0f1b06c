#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fese/random.hpp"

namespace fese {

struct SelftestCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Quick invariant checks over every layer (group laws, share recovery,
/// Bloom lookup, protocol round trips in both modes, transport transcripts,
/// index serialization). Small parameters; runs in a few seconds.
std::vector<SelftestCheck> run_selftest(const Seed& seed);

/// Prints one "PASS name" or "FAIL name: detail" line per check and returns
/// the number of failures.
int report_selftest(const std::vector<SelftestCheck>& checks, std::ostream& out);

}  // namespace fese
