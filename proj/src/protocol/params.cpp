#include "fese/protocol/params.hpp"

#include <charconv>
#include <sstream>

#include "fese/error.hpp"

namespace fese {

std::string_view scheme_mode_name(SchemeMode mode) {
  return mode == SchemeMode::kBase ? "base" : "extended";
}

SchemeMode parse_scheme_mode(std::string_view name) {
  if (name == "base") return SchemeMode::kBase;
  if (name == "extended") return SchemeMode::kExtended;
  fail(ErrorCode::kConfig, "unknown scheme mode \"" + std::string(name) + "\"");
}

void SchemeParams::validate() const {
  auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::kConfig, what); };
  check(n_bits >= 1 && n_bits <= 65536, "N must lie in [1, 65536]");
  check(t >= 1 && t <= n_bits && t <= 65535, "t must satisfy 1 <= t <= min(N, 65535)");
  check(mu >= 1 && mu <= 65535, "mu must lie in [1, 65535]");
  check(nu >= 1 && nu <= 65535, "nu must lie in [1, 65535]");
  check(hc_size() <= 65535, "mu*nu must not exceed 65535");
  check(m >= 1, "m must be positive");
  check(l >= 1 && l <= 65535, "l must lie in [1, 65535]");
  check(tau <= hc_size(), "tau must not exceed mu*nu");
  check(lambda_min < lambda_max && lambda_max <= n_bits,
        "thresholds must satisfy lambda_min < lambda_max <= N");
  check(tag_bits >= 1 && tag_bits <= 40, "tag_bits must lie in [1, 40]");
  if (mode == SchemeMode::kExtended) {
    check(full_intersection(), "extended mode needs every share: tau must be mu*nu");
    check(hc_size() >= 2, "extended mode splits tags into mu*nu >= 2 shares");
  }
}

namespace {

std::uint32_t parse_u32(std::string_view key, std::string_view value) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  require(ec == std::errc() && ptr == value.data() + value.size(), ErrorCode::kConfig,
          "invalid value \"" + std::string(value) + "\" for " + std::string(key));
  return v;
}

constexpr std::string_view kKeys[] = {"N",          "t",          "mu",       "nu",
                                      "m",          "l",          "tau",      "lambda_min",
                                      "lambda_max", "tag_bits",   "group",    "mode",
                                      "query_transport", "update_transport"};

}  // namespace

bool SchemeParams::is_key(std::string_view key) {
  for (auto k : kKeys) {
    if (k == key) return true;
  }
  return false;
}

void SchemeParams::set(std::string_view key, std::string_view value) {
  if (key == "N") n_bits = parse_u32(key, value);
  else if (key == "t") t = parse_u32(key, value);
  else if (key == "mu") mu = parse_u32(key, value);
  else if (key == "nu") nu = parse_u32(key, value);
  else if (key == "m") m = parse_u32(key, value);
  else if (key == "l") l = parse_u32(key, value);
  else if (key == "tau") tau = value == "full" ? 0 : parse_u32(key, value);
  else if (key == "lambda_min") lambda_min = parse_u32(key, value);
  else if (key == "lambda_max") lambda_max = parse_u32(key, value);
  else if (key == "tag_bits") tag_bits = parse_u32(key, value);
  else if (key == "group") group = parse_group_kind(value);
  else if (key == "mode") mode = parse_scheme_mode(value);
  else if (key == "query_transport") query = parse_query_transport(value);
  else if (key == "update_transport") update = parse_update_transport(value);
  else fail(ErrorCode::kConfig, "unknown config key \"" + std::string(key) + "\"");
}

std::string SchemeParams::to_config() const {
  std::ostringstream out;
  out << "N = " << n_bits << "\n"
      << "t = " << t << "\n"
      << "mu = " << mu << "\n"
      << "nu = " << nu << "\n"
      << "m = " << m << "\n"
      << "l = " << l << "\n";
  if (tau == 0) {
    out << "tau = full\n";
  } else {
    out << "tau = " << tau << "\n";
  }
  out << "lambda_min = " << lambda_min << "\n"
      << "lambda_max = " << lambda_max << "\n"
      << "tag_bits = " << tag_bits << "\n"
      << "group = " << group_kind_name(group) << "\n"
      << "mode = " << scheme_mode_name(mode) << "\n"
      << "query_transport = " << query_transport_name(query) << "\n"
      << "update_transport = " << update_transport_name(update) << "\n";
  return out.str();
}

void SchemeParams::serialize(ByteWriter& w) const {
  w.u32(n_bits);
  w.u16(static_cast<std::uint16_t>(t));
  w.u16(static_cast<std::uint16_t>(mu));
  w.u16(static_cast<std::uint16_t>(nu));
  w.u32(m);
  w.u16(static_cast<std::uint16_t>(l));
  w.u32(tau);
  w.u32(lambda_min);
  w.u32(lambda_max);
  w.u8(static_cast<std::uint8_t>(tag_bits));
  w.u8(static_cast<std::uint8_t>(group));
  w.u8(static_cast<std::uint8_t>(mode));
  w.u8(static_cast<std::uint8_t>(query));
  w.u8(static_cast<std::uint8_t>(update));
}

SchemeParams SchemeParams::deserialize(ByteReader& r) {
  SchemeParams p;
  p.n_bits = r.u32();
  p.t = r.u16();
  p.mu = r.u16();
  p.nu = r.u16();
  p.m = r.u32();
  p.l = r.u16();
  p.tau = r.u32();
  p.lambda_min = r.u32();
  p.lambda_max = r.u32();
  p.tag_bits = r.u8();
  std::uint8_t group = r.u8();
  std::uint8_t mode = r.u8();
  std::uint8_t query = r.u8();
  std::uint8_t update = r.u8();
  require(group >= 1 && group <= 2, ErrorCode::kFormat, "unknown group id");
  require(mode <= 1 && query <= 2 && update <= 1, ErrorCode::kFormat, "unknown mode or transport id");
  p.group = static_cast<GroupKind>(group);
  p.mode = static_cast<SchemeMode>(mode);
  p.query = static_cast<QueryTransport>(query);
  p.update = static_cast<UpdateTransport>(update);
  try {
    p.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("stored parameters invalid: ") + e.what());
  }
  return p;
}

}  // namespace fese
