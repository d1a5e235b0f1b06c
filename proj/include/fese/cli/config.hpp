#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fese/protocol/params.hpp"

namespace fese {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses "key = value" lines. Blank lines and lines starting with '#' are
/// skipped; surrounding whitespace is trimmed. Throws kConfig on a line
/// without '=', an empty key, or a repeated key.
KeyValues parse_key_values(std::string_view text);

/// Applies every pair through `set`, prefixing errors with the source name.
template <class Target>
void apply_key_values(Target& target, const KeyValues& kv) {
  for (const auto& [k, v] : kv) target.set(k, v);
}

/// Path named by FESE_CONFIG, or empty.
std::string default_config_path();

/// Defaults overridden by the file at `path` (if non-empty), then validated.
SchemeParams load_params(const std::string& path);

}  // namespace fese
