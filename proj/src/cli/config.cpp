#include "fese/cli/config.hpp"

#include <cstdlib>
#include <set>

#include "fese/bytes.hpp"
#include "fese/error.hpp"

namespace fese {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorCode::kConfig,
            "line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    require(!key.empty(), ErrorCode::kConfig, "line " + std::to_string(line_no) + ": empty key");
    require(seen.insert(key).second, ErrorCode::kConfig,
            "line " + std::to_string(line_no) + ": key \"" + key + "\" given twice");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::string default_config_path() {
  const char* env = std::getenv("FESE_CONFIG");
  return env ? std::string(env) : std::string();
}

SchemeParams load_params(const std::string& path) {
  SchemeParams p;
  if (!path.empty()) {
    Bytes raw;
    try {
      raw = read_file(path);
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, e.what());
    }
    try {
      apply_key_values(p, parse_key_values(std::string_view(
                              reinterpret_cast<const char*>(raw.data()), raw.size())));
    } catch (const Error& e) {
      fail(e.code(), path + ": " + e.what());
    }
  }
  p.validate();
  return p;
}

}  // namespace fese
