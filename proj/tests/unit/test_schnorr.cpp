#include "doctest.h"
#include "ztc/crypto/schnorr.hpp"

using namespace ztc;
using namespace ztc::crypto;

TEST_CASE("sign and verify in both groups") {
  for (const Group* g : {&Group::tiny(), &Group::production()}) {
    netsim::RngStream rng(21);
    const Keypair k = Keypair::generate(rng, *g);
    const std::string msg = "transfer 100";
    const Signature sig = schnorr_sign(k.sk, as_bytes(msg), *g, rng);
    CHECK(schnorr_verify(k.pk, as_bytes(msg), sig, *g));
    CHECK(!schnorr_verify(k.pk, as_bytes(std::string_view{"transfer 101"}), sig, *g));
    const Bytes enc = encode_signature(sig, *g);
    CHECK(decode_signature(enc, *g) == sig);
    CHECK(schnorr_verify_bytes(k.pk, as_bytes(msg), enc, *g));
  }
}

TEST_CASE("wrong key G^(sk+1) fails") {
  const Group& g = Group::tiny();
  netsim::RngStream rng(4);
  for (int i = 0; i < 50; ++i) {
    const Keypair k = Keypair::generate(rng, g);
    const Signature sig = schnorr_sign(k.sk, as_bytes(std::string_view{"m"}), g, rng);
    const Element other = g.pow_g(g.add(k.sk, g.scalar(1)));
    CHECK(!schnorr_verify(other, as_bytes(std::string_view{"m"}), sig, g));
  }
}

TEST_CASE("signature equation by hand") {
  const Group& g = Group::tiny();
  netsim::RngStream rng(8);
  const Keypair k = Keypair::generate(rng, g);
  const Bytes m = {1, 2, 3};
  const Signature sig = schnorr_sign(k.sk, m, g, rng);
  const Scalar e = signature_challenge(sig.r, k.pk, m, g);
  CHECK(g.pow_g(sig.s) == g.mul(sig.r, g.pow(k.pk, e)));
}

TEST_CASE("malformed signatures verify false") {
  const Group& g = Group::production();
  netsim::RngStream rng(2);
  const Keypair k = Keypair::generate(rng, g);
  const Bytes m = {9};
  CHECK(!schnorr_verify_bytes(k.pk, m, Bytes{}, g));
  CHECK(!schnorr_verify_bytes(k.pk, m, Bytes(64, 0), g));
  CHECK(!schnorr_verify_bytes(k.pk, m, Bytes(65, 0xff), g));
  CHECK(!schnorr_verify(k.pk, m, Signature{Element(BigInt(0)), Scalar()}, g));
}

TEST_CASE("derived keys are deterministic and label-separated") {
  const Group& g = Group::production();
  CHECK(Keypair::derive(1, "alpha/alice", g).pk == Keypair::derive(1, "alpha/alice", g).pk);
  CHECK(!(Keypair::derive(1, "alpha/alice", g).pk == Keypair::derive(1, "alpha/bob", g).pk));
  CHECK(!(Keypair::derive(1, "alpha/alice", g).pk == Keypair::derive(2, "alpha/alice", g).pk));
  CHECK_THROWS_AS(Keypair::from_secret(Scalar(), g), std::invalid_argument);
}
