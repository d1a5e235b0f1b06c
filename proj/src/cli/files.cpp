#include "fese/cli/files.hpp"

#include <cstdio>
#include <filesystem>

#include "fese/error.hpp"

namespace fese {

namespace {

template <class Fn>
auto load(const std::string& path, Fn&& parse) {
  Bytes raw = read_file(path);
  try {
    return parse(ByteView(raw));
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

}  // namespace

std::string Workspace::path(const char* name) const {
  return (std::filesystem::path(dir) / name).string();
}

PublicBundle Workspace::load_public() const {
  return load(public_key(), [](ByteView b) { return PublicBundle::deserialize(b); });
}

SecretBundle Workspace::load_secret() const {
  return load(secret_key(), [](ByteView b) { return SecretBundle::deserialize(b); });
}

ServerState Workspace::load_index() const {
  return load(index(), [](ByteView b) { return ServerState::deserialize(b); });
}

SlotAllocator Workspace::load_allocator() const {
  return load(allocator(), [](ByteView b) { return SlotAllocator::deserialize(b); });
}

Registry Workspace::load_registry() const {
  if (!file_exists(registry())) return {};
  std::string text = read_text_file(registry());
  try {
    return Registry::from_text(text);
  } catch (const Error& e) {
    fail(e.code(), registry() + ": " + e.what());
  }
}

void Workspace::save_index(const ServerState& state) const {
  write_file_atomic(index(), state.serialize());
}

void Workspace::save_allocator(const SlotAllocator& allocator) const {
  write_file_atomic(this->allocator(), allocator.serialize());
}

void Workspace::save_registry(const Registry& registry) const {
  std::string text = registry.to_text();
  write_file_atomic(this->registry(),
                    ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_file_atomic(const std::string& path, ByteView data) {
  const std::string tmp = path + ".tmp";
  write_file(tmp, data);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::kFormat, "cannot replace " + path + ": " + ec.message());
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

std::string read_text_file(const std::string& path) {
  Bytes raw = read_file(path);
  return std::string(raw.begin(), raw.end());
}

}  // namespace fese
