#include <set>

#include "doctest.h"
#include "ztc/zkp/tx_proof.hpp"

using namespace ztc;
using namespace ztc::zkp;
using crypto::BigInt;
using ledger::Transaction;

namespace {

struct Fixture {
  const Group& g;
  netsim::RngStream rng{99};
  crypto::Keypair keys;
  std::uint64_t balance;
  Scalar blinding;
  Commitment published;
  Transaction tx;

  Fixture(const Group& group, std::uint64_t bal, std::uint64_t amount, std::uint64_t fee)
      : g(group), keys(crypto::Keypair::generate(rng, group)), balance(bal) {
    blinding = g.random_scalar(rng);
    published = crypto::pedersen_commit(g.scalar(bal), blinding, g);
    tx.sender = ledger::address_of(keys.pk, g);
    tx.receiver = ledger::address_from_u64(0x5678);
    tx.amount = amount;
    tx.fee = fee;
    tx.asset = ledger::asset_id_from_symbol("DOT");
    tx.nonce = 3;
    tx.origin_chain = ledger::chain_id_from_name("alpha");
    tx.dest_chain = ledger::chain_id_from_name("beta");
  }

  // Proves and signs, as the origin chain does.
  TxValidityProof prove() {
    TxValidityProof p = generate_tx_proof(tx, keys.sk, balance, blinding, g, rng);
    sign(tx);
    return p;
  }
  void sign(Transaction& t) {
    t.signature = crypto::encode_signature(crypto::schnorr_sign(keys.sk, t.hash().view(), g, rng), g);
  }
  ValidityResult check(const Transaction& t, const TxValidityProof& p) {
    return verify_tx_proof(t, published, p, keys.pk, g);
  }
};

}  // namespace

TEST_CASE("honest proofs verify in both profiles") {
  Fixture prod(Group::production(), 1000, 100, 5);
  CHECK(prod.check(prod.tx, prod.prove()) == ValidityResult::valid());
  CHECK(prod.prove().range_proof.n_bits == 64);

  Fixture tiny(Group::tiny(), 30, 10, 1);
  const TxValidityProof p = tiny.prove();
  CHECK(tiny.check(tiny.tx, p) == ValidityResult::valid());
  CHECK(p.range_proof.n_bits == 6);
}

TEST_CASE("range target opens to balance - amount - fee") {
  Fixture f(Group::tiny(), 30, 10, 1);
  const TxValidityProof p = f.prove();
  REQUIRE(f.check(f.tx, p).is_valid());
  const Commitment target = crypto::commit_sub_public(f.published, f.g.scalar(11), f.g);
  std::optional<unsigned long> opened;
  for (unsigned long v = 0; v < 101; ++v) {
    if (crypto::pedersen_commit(f.g.scalar(v), f.blinding, f.g) == target) opened = v;
  }
  CHECK(opened == 19);
}

TEST_CASE("the prover refuses insufficient balance and foreign keys") {
  Fixture f(Group::production(), 99, 100, 0);
  CHECK_THROWS_AS(f.prove(), ProofError);
  Fixture fee(Group::production(), 100, 100, 1);
  CHECK_THROWS_AS(fee.prove(), ProofError);
  Fixture exact(Group::production(), 101, 100, 1);
  CHECK(exact.check(exact.tx, exact.prove()).is_valid());

  Fixture k(Group::production(), 500, 1, 0);
  k.tx.sender = ledger::address_from_u64(0x1234);
  try {
    k.prove();
    FAIL("expected KeyMismatch");
  } catch (const ProofError& e) {
    CHECK(e.code() == ProofError::Code::KeyMismatch);
  }
}

TEST_CASE("tampering maps to the expected reasons") {
  Fixture f(Group::production(), 1000, 100, 5);
  const TxValidityProof p = f.prove();
  const auto reason = [&](const Transaction& t, const TxValidityProof& q) {
    return f.check(t, q).reason();
  };

  Transaction t = f.tx;
  t.amount += 1;
  CHECK(reason(t, p) == InvalidReason::MalformedProof);
  t = f.tx;
  t.fee += 1;
  CHECK(reason(t, p) == InvalidReason::MalformedProof);
  t = f.tx;
  std::swap(t.sender, t.receiver);
  CHECK(reason(t, p) == InvalidReason::MalformedProof);

  TxValidityProof q = p;
  q.auth_signature = crypto::Signature{Element(BigInt(0)), Scalar()};
  CHECK(reason(f.tx, q) == InvalidReason::InvalidSignature);
  CHECK(f.check(f.tx, p) == ValidityResult::valid());
  CHECK(verify_tx_proof(f.tx, f.published, p, std::nullopt, f.g).reason() == InvalidReason::InvalidSignature);
  CHECK(verify_tx_proof(f.tx, f.published, p, f.g.pow_g(f.g.scalar(5)), f.g).reason() ==
        InvalidReason::InvalidSignature);

  // Rebinding: new hash and fresh signatures, but the range proof still
  // carries the old context.
  t = f.tx;
  t.amount += 1;
  q = p;
  q.binding_hash = t.hash().bytes;
  q.auth_signature = crypto::schnorr_sign(f.keys.sk, t.hash().view(), f.g, f.rng);
  f.sign(t);
  CHECK(reason(t, q) == InvalidReason::NotEnoughBalance);

  q = p;
  q.balance_commitment = crypto::pedersen_commit(f.g.scalar(1), Scalar(), f.g);
  CHECK(reason(f.tx, q) == InvalidReason::MalformedProof);

  q = p;
  q.range_proof = prove_range(f.g.scalar(3), Scalar(), 8, range_context(p.binding_hash), f.g, f.rng);
  CHECK(reason(f.tx, q) == InvalidReason::MalformedProof);
}

TEST_CASE("a proof made against an inflated commitment fails the real one") {
  Fixture f(Group::production(), 50, 100, 0);
  // Dishonest prover commits to 500 elsewhere; the published one is 50.
  const Scalar fake_blinding = f.g.random_scalar(f.rng);
  TxValidityProof p = generate_tx_proof(f.tx, f.keys.sk, 500, fake_blinding, f.g, f.rng);
  f.sign(f.tx);
  CHECK(f.check(f.tx, p).reason() == InvalidReason::MalformedProof);
  p.balance_commitment = f.published;
  CHECK(f.check(f.tx, p).reason() == InvalidReason::NotEnoughBalance);
}

TEST_CASE("simulated transaction proofs verify") {
  const Group& g = Group::tiny();
  for (std::uint64_t bal : {0ULL, 5ULL, 60ULL}) {
    Fixture f(g, bal, 10, 1);
    const TxValidityProof p = simulate_tx_proof(f.tx, f.published, f.keys.pk, g, f.rng);
    // the simulated signature covers the same message as the tx signature
    f.tx.signature = crypto::encode_signature(p.auth_signature, g);
    CHECK(f.check(f.tx, p) == ValidityResult::valid());
  }
}

TEST_CASE("every challenge hashes a distinct context") {
  Fixture f(Group::production(), 1000, 1, 1);
  const auto ctxs = fiat_shamir_contexts(f.prove());
  CHECK(ctxs.size() == 64 + 2);
  std::set<std::pair<std::string, Bytes>> uniq(ctxs.begin(), ctxs.end());
  CHECK(uniq.size() == ctxs.size());
}

TEST_CASE("wire encoding") {
  Fixture f(Group::production(), 1000, 10, 0);
  const TxValidityProof p = f.prove();
  const Bytes enc = encode_tx_proof(p, f.g);
  const TxValidityProof back = decode_tx_proof(enc, f.g);
  CHECK(encode_tx_proof(back, f.g) == enc);
  CHECK(f.check(f.tx, back).is_valid());
  CHECK_THROWS_AS(decode_tx_proof(Bytes(enc.begin(), enc.begin() + 40), f.g), DecodeError);
  netsim::RngStream junk(1);
  for (int i = 0; i < 50; ++i) {
    Bytes b(1 + junk.uniform_inclusive(200));
    for (auto& x : b) x = static_cast<std::uint8_t>(junk.next());
    CHECK_THROWS_AS(decode_tx_proof(b, f.g), DecodeError);
  }
}

TEST_CASE("result names") {
  CHECK(ValidityResult::valid().to_string() == "Valid");
  CHECK(ValidityResult::parse("ReplayedNonce").reason() == InvalidReason::ReplayedNonce);
  for (std::uint8_t c = 0; c <= 7; ++c) {
    CHECK(ValidityResult::from_code(c).code() == c);
  }
  CHECK_THROWS(ValidityResult::from_code(8));
  CHECK(!parse_reason("Bogus"));
}
