#pragma once

#include <string>

#include "fese/identification/registry.hpp"
#include "fese/pir/bucket_store.hpp"
#include "fese/protocol/keys.hpp"
#include "fese/protocol/server.hpp"

namespace fese {

/// Layout of a key/index directory written by `keygen`:
///   public.key   sender bundle (FEPK)
///   secret.key   receiver bundle (FESK)
///   params.cfg   the parameters as key = value lines
///   index.fese   server state (FESE)
///   slots.occ    sender-side slot occupancy (FEOC)
///   registry.tsv identity provider's registry
struct Workspace {
  std::string dir;

  std::string path(const char* name) const;
  std::string public_key() const { return path("public.key"); }
  std::string secret_key() const { return path("secret.key"); }
  std::string params() const { return path("params.cfg"); }
  std::string index() const { return path("index.fese"); }
  std::string allocator() const { return path("slots.occ"); }
  std::string registry() const { return path("registry.tsv"); }

  PublicBundle load_public() const;
  SecretBundle load_secret() const;
  ServerState load_index() const;
  SlotAllocator load_allocator() const;
  /// Empty registry when the file does not exist yet.
  Registry load_registry() const;

  void save_index(const ServerState& state) const;
  void save_allocator(const SlotAllocator& allocator) const;
  void save_registry(const Registry& registry) const;
};

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, ByteView data);
bool file_exists(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace fese
