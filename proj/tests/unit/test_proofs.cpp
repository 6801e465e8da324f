#include <set>

#include "doctest.h"
#include "ztc/zkp/proofs.hpp"

using namespace ztc;
using namespace ztc::zkp;
using crypto::BigInt;

namespace {

Bytes ctx(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace

TEST_CASE("bit proofs") {
  for (const Group* g : {&Group::tiny(), &Group::production()}) {
    netsim::RngStream rng(1);
    for (unsigned b : {0u, 1u}) {
      const auto [c, p] = prove_bit(g->scalar(b), g->random_scalar(rng), ctx("a"), *g, rng);
      CHECK(verify_bit(c, p, ctx("a"), *g));
      CHECK(!verify_bit(c, p, ctx("b"), *g));
      const Bytes enc = [&] {
        ByteWriter w;
        encode(w, p, *g);
        return w.take();
      }();
      const BitProof back = decode_bit_proof(enc, *g);
      CHECK(verify_bit(c, back, ctx("a"), *g));
    }
    const auto [c2, p2] = prove_bit(g->scalar(2), g->random_scalar(rng), ctx("a"), *g, rng);
    CHECK(!verify_bit(c2, p2, ctx("a"), *g));
  }
}

TEST_CASE("tiny exhaustive range check, n_bits = 5") {
  const Group& g = Group::tiny();
  netsim::RngStream rng(2);
  for (std::uint64_t v = 0; v < 32; ++v) {
    const Scalar r = g.random_scalar(rng);
    const Commitment target = crypto::pedersen_commit(g.scalar(v), r, g);
    const RangeProof p = prove_range(g.scalar(v), r, 5, ctx("range"), g, rng);
    CHECK(verify_range(target, p, ctx("range"), g));
    const Commitment up{g.mul(target.element, g.g())};
    const Commitment down{g.mul(target.element, g.inv(g.g()))};
    CHECK(!verify_range(up, p, ctx("range"), g));
    CHECK(!verify_range(down, p, ctx("range"), g));
    CHECK(!verify_range(target, p, ctx("other"), g));
  }
}

TEST_CASE("values outside the width are refused") {
  netsim::RngStream rng(3);
  const Group& g = Group::production();
  CHECK_THROWS_AS(prove_range(g.scalar(32), Scalar(), 5, ctx("x"), g, rng), std::invalid_argument);
  const RangeProof p = prove_range(g.scalar(~0ULL), Scalar(), 64, ctx("x"), g, rng);
  CHECK(verify_range(crypto::pedersen_commit(g.scalar(~0ULL), Scalar(), g), p, ctx("x"), g));
  // Tiny group cannot carry 7-bit values below q = 101 safely.
  CHECK_THROWS_AS(prove_range(Group::tiny().scalar(0), Scalar(), 7, ctx("x"), Group::tiny(), rng),
                  std::invalid_argument);
}

TEST_CASE("bit commitments reused across proofs are rejected") {
  const Group& g = Group::production();
  netsim::RngStream rng(4);
  const Scalar r = g.random_scalar(rng);
  const Commitment target = crypto::pedersen_commit(g.scalar(1000), r, g);
  const RangeProof a = prove_range(g.scalar(1000), r, 16, ctx("tx-a"), g, rng);
  RangeProof b = prove_range(g.scalar(1000), r, 16, ctx("tx-b"), g, rng);
  REQUIRE(verify_range(target, b, ctx("tx-b"), g));
  b.bit_commitments[3] = a.bit_commitments[3];
  b.bit_proofs[3] = a.bit_proofs[3];
  CHECK(!verify_range(target, b, ctx("tx-b"), g));
  CHECK(!verify_range(target, a, ctx("tx-b"), g));
}

TEST_CASE("range proof structure mutations") {
  const Group& g = Group::production();
  netsim::RngStream rng(5);
  const Scalar r = g.random_scalar(rng);
  const Commitment target = crypto::pedersen_commit(g.scalar(77), r, g);
  const RangeProof good = prove_range(g.scalar(77), r, 8, ctx("c"), g, rng);

  RangeProof p = good;
  p.n_bits = 9;
  CHECK(!verify_range(target, p, ctx("c"), g));
  p = good;
  p.bit_proofs.pop_back();
  CHECK(!verify_range(target, p, ctx("c"), g));
  p = good;
  p.aggregation_blinding_proofs.back().s = g.add(p.aggregation_blinding_proofs.back().s, g.scalar(1));
  CHECK(!verify_range(target, p, ctx("c"), g));
  p = good;
  p.aggregation_blinding_proofs.push_back(p.aggregation_blinding_proofs.back());
  CHECK(!verify_range(target, p, ctx("c"), g));
  p = good;
  p.bit_commitments[0].element = Element(BigInt(0));
  CHECK(!verify_range(target, p, ctx("c"), g));
}

TEST_CASE("aggregation rounds reach 40 bits") {
  CHECK(aggregation_rounds(Group::production()) == 1);
  // floor(log2 101) = 6 bits per round
  CHECK(aggregation_rounds(Group::tiny()) == 7);
  netsim::RngStream rng(9);
  const Group& g = Group::tiny();
  const RangeProof p = prove_range(g.scalar(3), g.scalar(4), 3, ctx("r"), g, rng);
  CHECK(p.aggregation_blinding_proofs.size() == 7);
  RangeProof one = p;
  one.aggregation_blinding_proofs.resize(1);
  CHECK(!verify_range(crypto::pedersen_commit(g.scalar(3), g.scalar(4), g), one, ctx("r"), g));
}

TEST_CASE("non-interactive proof splits into a valid interactive transcript") {
  const Group& g = Group::tiny();
  netsim::RngStream rng(6);
  const Scalar r = g.random_scalar(rng);
  const Commitment target = crypto::pedersen_commit(g.scalar(21), r, g);
  const RangeProof p = prove_range(g.scalar(21), r, 5, ctx("i"), g, rng);
  CHECK(verify_range_interactive(g, target, first_message_of(p),
                                 recompute_challenges(g, target, p, ctx("i")), response_of(p)));
}

TEST_CASE("encode and decode") {
  const Group& g = Group::production();
  netsim::RngStream rng(7);
  const Scalar r = g.random_scalar(rng);
  const RangeProof p = prove_range(g.scalar(5), r, 64, ctx("e"), g, rng);
  const Bytes enc = encode_range_proof(p, g);
  const RangeProof back = decode_range_proof(enc, g);
  CHECK(encode_range_proof(back, g) == enc);
  CHECK(verify_range(crypto::pedersen_commit(g.scalar(5), r, g), back, ctx("e"), g));

  Bytes cut(enc.begin(), enc.end() - 1);
  CHECK_THROWS_AS(decode_range_proof(cut, g), DecodeError);
  Bytes extra = enc;
  extra.push_back(0);
  CHECK_THROWS_AS(decode_range_proof(extra, g), DecodeError);
}

TEST_CASE("simulated proofs verify without a witness") {
  const Group& g = Group::tiny();
  netsim::RngStream rng(8);
  for (int i = 0; i < 200; ++i) {
    const Commitment c{g.pow_g(g.random_scalar(rng))};  // any element, opening unknown
    ByteWriter w;
    w.put_u32(static_cast<std::uint32_t>(i));
    CHECK(verify_bit(c, simulate_bit(c, w.bytes(), g, rng), w.bytes(), g));
  }
  CHECK_THROWS(simulate_bit(Commitment{}, ctx("x"), Group::production(), rng));
}

TEST_CASE("contexts of one proof are all distinct") {
  const Bytes base = ctx("tx");
  std::set<Bytes> seen;
  for (std::uint32_t i = 0; i < 64; ++i) seen.insert(bit_context(base, i));
  seen.insert(aggregation_context(base, 0));
  seen.insert(aggregation_context(base, 1));
  CHECK(seen.size() == 66);
}
