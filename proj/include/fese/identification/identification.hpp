#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fese/identification/registry.hpp"
#include "fese/protocol/client.hpp"

namespace fese {

struct EnrolledUser {
  std::string pseudo_identity;
  Identifier identifier = 0;  ///< also the handle of the stored reference
};

struct Candidate {
  std::string pseudo_identity;
  Identifier identifier = 0;
  bool verified = false;  ///< distance <= lambda_min
  std::size_t distance = 0;
  std::optional<BinaryTemplate> reference;  ///< set when templates are requested
};

struct IdentificationResult {
  std::vector<Candidate> candidates;  ///< one per retrieved identifier, ascending

  /// Pseudo-identities of verified candidates.
  std::vector<std::string> identities() const;
  std::size_t verified_count() const;
};

/// Runs Send for b and records (id, phi) in the registry.
EnrolledUser enroll(const std::string& pseudo_identity, const BinaryTemplate& b, Sender& sender,
                    Channel& channel, Registry& registry);

/// Runs Retrieve for b', fetches and decrypts each candidate's reference and
/// checks it against lambda_min. Throws kIndexInconsistency when a retrieved
/// identifier is missing from the registry or the server.
IdentificationResult identify(const BinaryTemplate& b, Receiver& receiver, Channel& channel,
                              const Registry& registry, bool with_templates = false);

}  // namespace fese
