#include "fese/identification/identification.hpp"

#include "fese/error.hpp"

namespace fese {

std::vector<std::string> IdentificationResult::identities() const {
  std::vector<std::string> out;
  for (const auto& c : candidates)
    if (c.verified) out.push_back(c.pseudo_identity);
  return out;
}

std::size_t IdentificationResult::verified_count() const {
  std::size_t n = 0;
  for (const auto& c : candidates) n += c.verified;
  return n;
}

EnrolledUser enroll(const std::string& pseudo_identity, const BinaryTemplate& b, Sender& sender,
                    Channel& channel, Registry& registry) {
  // Validate the name before anything reaches the server.
  Registry probe;
  probe.add(0, pseudo_identity);
  Identifier id = sender.send(channel, b);
  registry.add(id, pseudo_identity);
  return {pseudo_identity, id};
}

IdentificationResult identify(const BinaryTemplate& b, Receiver& receiver, Channel& channel,
                              const Registry& registry, bool with_templates) {
  const auto lambda_min = receiver.sec().pub.params.lambda_min;
  IdentificationResult result;
  for (Identifier id : receiver.retrieve(channel, b)) {
    auto name = registry.find(id);
    require(name.has_value(), ErrorCode::kIndexInconsistency,
            "retrieved identifier " + std::to_string(id) + " is not in the registry");
    BinaryTemplate ref = receiver.fetch_template(channel, id);
    Candidate c;
    c.pseudo_identity = *name;
    c.identifier = id;
    c.distance = hamming_distance(b, ref);
    c.verified = c.distance <= lambda_min;
    if (with_templates) c.reference = std::move(ref);
    result.candidates.push_back(std::move(c));
  }
  return result;
}

}  // namespace fese
