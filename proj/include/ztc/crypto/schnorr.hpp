#pragma once

#include "ztc/crypto/group.hpp"

namespace ztc::crypto {

inline constexpr std::string_view kSignatureTag = "ZTC/SIG";

struct Keypair {
  Scalar sk;
  Element pk;

  /// pk = G^sk; sk must be in [1, q).
  static Keypair from_secret(const Scalar& sk, const Group& group);
  /// Deterministic key from a seed and a label (used for scenario accounts).
  static Keypair derive(std::uint64_t seed, std::string_view label, const Group& group);
  static Keypair generate(netsim::RngStream& rng, const Group& group);
};

/// Schnorr signature: s = k + e*sk, e = H("ZTC/SIG", R || pk || m).
struct Signature {
  Element r;
  Scalar s;

  bool operator==(const Signature& o) const { return r == o.r && s == o.s; }
};

Scalar signature_challenge(const Element& r, const Element& pk, ByteView message,
                           const Group& group);

Signature schnorr_sign(const Scalar& sk, ByteView message, const Group& group,
                       netsim::RngStream& rng);
/// Never throws; malformed inputs verify false.
bool schnorr_verify(const Element& pk, ByteView message, const Signature& sig,
                    const Group& group);

Bytes encode_signature(const Signature& sig, const Group& group);
Signature decode_signature(ByteView bytes, const Group& group);
/// Wire-level check: decoding failures count as a bad signature.
bool schnorr_verify_bytes(const Element& pk, ByteView message, ByteView sig_bytes,
                          const Group& group);

}  // namespace ztc::crypto
