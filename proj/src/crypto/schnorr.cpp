#include "ztc/crypto/schnorr.hpp"

#include <stdexcept>

namespace ztc::crypto {

Keypair Keypair::from_secret(const Scalar& sk, const Group& group) {
  if (sk.is_zero() || sk.v >= group.q()) {
    throw std::invalid_argument("secret key must be in [1, q)");
  }
  return Keypair{sk, group.pow_g(sk)};
}

Keypair Keypair::derive(std::uint64_t seed, std::string_view label, const Group& group) {
  ByteWriter w;
  w.put_u64(seed);
  w.put_lp(label);
  Scalar sk = group.hash_to_scalar("ZTC/KEY", w.bytes());
  if (sk.is_zero()) {
    sk = group.scalar(1);
  }
  return from_secret(sk, group);
}

Keypair Keypair::generate(netsim::RngStream& rng, const Group& group) {
  return from_secret(group.random_nonzero_scalar(rng), group);
}

Scalar signature_challenge(const Element& r, const Element& pk, ByteView message,
                           const Group& group) {
  ByteWriter w;
  group.encode(w, r);
  group.encode(w, pk);
  w.put_raw(message);
  return group.hash_to_scalar(kSignatureTag, w.bytes());
}

Signature schnorr_sign(const Scalar& sk, ByteView message, const Group& group,
                       netsim::RngStream& rng) {
  if (sk.is_zero() || sk.v >= group.q()) {
    throw std::invalid_argument("secret key must be in [1, q)");
  }
  const Element pk = group.pow_g(sk);
  const Scalar k = group.random_nonzero_scalar(rng);
  const Element r = group.pow_g(k);
  const Scalar e = signature_challenge(r, pk, message, group);
  return Signature{r, group.add(k, group.mul(e, sk))};
}

bool schnorr_verify(const Element& pk, ByteView message, const Signature& sig,
                    const Group& group) {
  if (!group.is_member(pk) || pk == group.identity() || !group.is_member(sig.r)) {
    return false;
  }
  if (sig.s.v < 0 || sig.s.v >= group.q()) {
    return false;
  }
  const Scalar e = signature_challenge(sig.r, pk, message, group);
  return group.pow_g(sig.s) == group.mul(sig.r, group.pow(pk, e));
}

Bytes encode_signature(const Signature& sig, const Group& group) {
  ByteWriter w;
  group.encode(w, sig.r);
  group.encode(w, sig.s);
  return w.take();
}

Signature decode_signature(ByteView bytes, const Group& group) {
  ByteReader r(bytes);
  Element re = group.decode_element(r.get_raw(group.element_width()));
  Scalar s = group.decode_scalar(r.get_raw(group.scalar_width()));
  r.expect_done();
  return Signature{std::move(re), std::move(s)};
}

bool schnorr_verify_bytes(const Element& pk, ByteView message, ByteView sig_bytes,
                          const Group& group) {
  try {
    return schnorr_verify(pk, message, decode_signature(sig_bytes, group), group);
  } catch (const DecodeError&) {
    return false;
  }
}

}  // namespace ztc::crypto
