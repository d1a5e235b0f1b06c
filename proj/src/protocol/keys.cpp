#include "fese/protocol/keys.hpp"

#include <cstring>

#include "fese/error.hpp"

namespace fese {

namespace {
constexpr std::uint16_t kKeyFileVersion = 1;
}

void IndexHeader::serialize(ByteWriter& w) const {
  params.serialize(w);
  lsh.serialize(w);
  w.raw(key_fingerprint);
}

IndexHeader IndexHeader::deserialize(ByteReader& r) {
  IndexHeader h;
  h.params = SchemeParams::deserialize(r);
  h.lsh = LshFamily::deserialize(r);
  auto fp = r.raw(16);
  h.key_fingerprint.assign(fp.begin(), fp.end());
  require(h.lsh.n_bits() == h.params.n_bits && h.lsh.t() == h.params.t &&
              h.lsh.mu() == h.params.mu,
          ErrorCode::kFormat, "LSH descriptor disagrees with parameters");
  return h;
}

Bytes IndexHeader::digest() const {
  ByteWriter w;
  w.raw(std::string_view("fese/index-header"));
  serialize(w);
  return fese::digest(w.bytes(), 32);
}

CompositeFamily PublicBundle::composite() const {
  return CompositeFamily(lsh, BloomHasher(bloom_key, params.nu, params.m));
}

IndexHeader PublicBundle::header() const {
  return {params, lsh, BloomHasher(bloom_key, params.nu, params.m).key_fingerprint()};
}

Bytes PublicBundle::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("FEPK"));
  w.u16(kKeyFileVersion);
  params.serialize(w);
  lsh.serialize(w);
  w.raw(bloom_key);
  group().encode(elgamal_pub, w);
  return std::move(w).take();
}

namespace {

PublicBundle read_public(ByteReader& r) {
  r.expect_magic("FEPK");
  require(r.u16() == kKeyFileVersion, ErrorCode::kFormat, "unsupported key file version");
  PublicBundle b;
  b.params = SchemeParams::deserialize(r);
  b.lsh = LshFamily::deserialize(r);
  auto key = r.raw(b.bloom_key.size());
  std::memcpy(b.bloom_key.data(), key.data(), key.size());
  b.elgamal_pub = b.group().read(r);
  require(b.lsh.n_bits() == b.params.n_bits && b.lsh.t() == b.params.t &&
              b.lsh.mu() == b.params.mu,
          ErrorCode::kFormat, "LSH descriptor disagrees with parameters");
  return b;
}

}  // namespace

PublicBundle PublicBundle::deserialize(ByteView data) {
  ByteReader r(data);
  PublicBundle b = read_public(r);
  r.expect_end();
  return b;
}

Bytes SecretBundle::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("FESK"));
  w.u16(kKeyFileVersion);
  w.raw(pub.serialize());
  pub.group().encode_scalar(secret, w);
  return std::move(w).take();
}

SecretBundle SecretBundle::deserialize(ByteView data) {
  ByteReader r(data);
  r.expect_magic("FESK");
  require(r.u16() == kKeyFileVersion, ErrorCode::kFormat, "unsupported key file version");
  SecretBundle s;
  s.pub = read_public(r);
  s.secret = s.pub.group().decode_scalar(r.raw(s.pub.group().scalar_width()));
  r.expect_end();
  require(s.pub.group().pow_base(s.secret) == s.pub.elgamal_pub, ErrorCode::kFormat,
          "secret key does not match the public key");
  return s;
}

}  // namespace fese
