#include "fese/identification/registry.hpp"

#include <charconv>
#include <sstream>

#include "fese/error.hpp"

namespace fese {

namespace {
constexpr std::string_view kHeaderLine = "# fese registry";
}

void Registry::add(Identifier id, const std::string& pseudo_identity) {
  require(!pseudo_identity.empty() &&
              pseudo_identity.find_first_of("\t\r\n") == std::string::npos,
          ErrorCode::kFormat, "pseudo-identity must be non-empty and free of tabs and line breaks");
  require(entries_.emplace(id, pseudo_identity).second, ErrorCode::kProtocol,
          "identifier " + std::to_string(id) + " is already registered");
}

std::optional<std::string> Registry::find(Identifier id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Registry::to_text() const {
  std::string out(kHeaderLine);
  out += '\n';
  for (const auto& [id, name] : entries_) out += std::to_string(id) + '\t' + name + '\n';
  return out;
}

Registry Registry::from_text(std::string_view text) {
  Registry reg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1) {
      require(line == kHeaderLine, ErrorCode::kFormat, "not a registry file");
      continue;
    }
    if (line.empty()) continue;
    auto tab = line.find('\t');
    Identifier id = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + std::min(tab, line.size()), id);
    require(tab != std::string_view::npos && ec == std::errc() && ptr == line.data() + tab,
            ErrorCode::kFormat, "registry line " + std::to_string(line_no) + " is malformed");
    reg.add(id, std::string(line.substr(tab + 1)));
  }
  require(line_no >= 1, ErrorCode::kFormat, "not a registry file");
  return reg;
}

}  // namespace fese
