#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "fese/bytes.hpp"
#include "fese/crypto/group.hpp"
#include "fese/pir/pir_client.hpp"

namespace fese {

enum class SchemeMode : std::uint8_t {
  kBase = 0,      ///< buckets hold Enc(g^phi)
  kExtended = 1,  ///< buckets hold split shares, re-randomized per retrieve
};

std::string_view scheme_mode_name(SchemeMode mode);
SchemeMode parse_scheme_mode(std::string_view name);

struct SchemeParams {
  std::uint32_t n_bits = 256;
  std::uint32_t t = 8;
  std::uint32_t mu = 8;
  std::uint32_t nu = 4;
  std::uint32_t m = 4096;
  std::uint32_t l = 32;
  std::uint32_t tau = 0;  ///< 0 selects the full intersection, mu*nu
  std::uint32_t lambda_min = 26;
  std::uint32_t lambda_max = 77;
  std::uint32_t tag_bits = 32;
  GroupKind group = GroupKind::kRistretto255;
  SchemeMode mode = SchemeMode::kBase;
  QueryTransport query = QueryTransport::kDirect;
  UpdateTransport update = UpdateTransport::kDirect;

  std::size_t hc_size() const { return static_cast<std::size_t>(mu) * nu; }
  std::size_t threshold() const { return tau == 0 ? hc_size() : tau; }
  bool full_intersection() const { return threshold() == hc_size(); }
  std::uint64_t tag_space() const { return std::uint64_t{1} << tag_bits; }

  /// Throws kConfig describing the first violated constraint.
  void validate() const;

  /// Sets one field from its config-file spelling. Throws kConfig for
  /// unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  static bool is_key(std::string_view key);
  /// key = value lines for every field.
  std::string to_config() const;

  void serialize(ByteWriter& w) const;
  static SchemeParams deserialize(ByteReader& r);

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

}  // namespace fese
