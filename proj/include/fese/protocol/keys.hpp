#pragma once

#include "fese/bloom.hpp"
#include "fese/bytes.hpp"
#include "fese/crypto/elgamal.hpp"
#include "fese/crypto/group.hpp"
#include "fese/lsh.hpp"
#include "fese/protocol/params.hpp"

namespace fese {

/// What the server knows about the index it hosts: parameters, the LSH
/// descriptor, and a fingerprint (never the value) of the Bloom hash key.
struct IndexHeader {
  SchemeParams params;
  LshFamily lsh;
  Bytes key_fingerprint;  ///< 16 bytes

  void serialize(ByteWriter& w) const;
  static IndexHeader deserialize(ByteReader& r);
  /// Digest over the serialized header; client and server compare it before
  /// talking so parameter drift is caught up front.
  Bytes digest() const;

  friend bool operator==(const IndexHeader&, const IndexHeader&) = default;
};

/// Everything a sender needs: parameters, hash families, public key.
struct PublicBundle {
  SchemeParams params;
  LshFamily lsh;
  HashKey bloom_key{};
  GroupElement elgamal_pub;

  const Group& group() const { return group_for(params.group); }
  CompositeFamily composite() const;
  IndexHeader header() const;

  /// "FEPK", u16 version, params, LSH descriptor, key, encoded h.
  Bytes serialize() const;
  static PublicBundle deserialize(ByteView data);

  friend bool operator==(const PublicBundle&, const PublicBundle&) = default;
};

/// Receiver material: the public bundle plus the ElGamal secret v.
struct SecretBundle {
  PublicBundle pub;
  Scalar secret;

  /// "FESK", u16 version, public bundle, encoded v.
  Bytes serialize() const;
  static SecretBundle deserialize(ByteView data);

  friend bool operator==(const SecretBundle&, const SecretBundle&) = default;
};

}  // namespace fese
