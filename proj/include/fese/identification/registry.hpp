#pragma once

#include <map>
#include <optional>
#include <string>

#include "fese/protocol/server.hpp"

namespace fese {

/// Identity provider's local table from identifier to pseudo-identity. It
/// never leaves the identity provider.
class Registry {
 public:
  /// Throws kProtocol if id is already registered, kFormat if the name is
  /// empty or contains a tab or line break.
  void add(Identifier id, const std::string& pseudo_identity);
  std::optional<std::string> find(Identifier id) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<Identifier, std::string>& entries() const { return entries_; }

  /// One "identifier<TAB>pseudo-identity" line per entry after a
  /// "# fese registry" line.
  std::string to_text() const;
  static Registry from_text(std::string_view text);

  friend bool operator==(const Registry&, const Registry&) = default;

 private:
  std::map<Identifier, std::string> entries_;
};

}  // namespace fese
