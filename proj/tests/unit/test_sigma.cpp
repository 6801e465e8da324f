#include <gmpxx.h>

#include "doctest.h"
#include "ztc/zkp/sigma.hpp"

using namespace ztc;
using namespace ztc::zkp;
using crypto::BigInt;

namespace {

const Group& tiny() { return Group::tiny(); }

unsigned long log_h(const Group& g, const Element& target) {
  for (unsigned long x = 0; x < g.q().get_ui(); ++x) {
    if (g.pow_h(g.scalar(x)) == target) return x;
  }
  FAIL("no discrete log");
  return 0;
}

// Witness of one bit commitment from two accepting transcripts that share a
// first message: the branch whose challenge moved reveals its blinding.
std::pair<unsigned, Scalar> extract_bit(const Group& g, const BitResponse& a, const BitResponse& b) {
  if (!(a.e1 == b.e1)) {
    return {1, g.mul(g.sub(a.z1, b.z1), g.inverse(g.sub(a.e1, b.e1)))};
  }
  return {0, g.mul(g.sub(a.z0, b.z0), g.inverse(g.sub(a.e0, b.e0)))};
}

}  // namespace

TEST_CASE("bit sessions accept 0 and 1") {
  netsim::RngStream rng(1);
  for (unsigned b : {0u, 1u}) {
    for (int i = 0; i < 20; ++i) {
      const Scalar r = tiny().random_scalar(rng);
      BitProverSession s(tiny(), tiny().scalar(b), r, rng);
      CHECK(s.commitment() == crypto::pedersen_commit(tiny().scalar(b), r, tiny()));
      const Scalar c = tiny().random_scalar(rng);
      CHECK(verify_bit_interactive(tiny(), s.commitment(), s.first_message(), c, s.respond(c)));
      const Scalar c2 = tiny().add(c, tiny().scalar(1));
      CHECK(!verify_bit_interactive(tiny(), s.commitment(), s.first_message(), c2, s.respond(c)));
    }
  }
}

TEST_CASE("an honest-looking session for the value 2 does not verify") {
  netsim::RngStream rng(2);
  const Scalar r = tiny().random_scalar(rng);
  BitProverSession s(tiny(), tiny().scalar(2), r, rng);
  const Scalar c = tiny().scalar(17);
  CHECK(!verify_bit_interactive(tiny(), s.commitment(), s.first_message(), c, s.respond(c)));
}

TEST_CASE("exhaustive responses for a commitment to 2 all leak log_H(G)") {
  // For one first message and every split of a challenge, enumerate all
  // (z0, z1). Any two accepting tuples would give log_H(C) and log_H(C/G),
  // whose difference is log_H(G): forging needs that discrete log.
  const Group& g = tiny();
  netsim::RngStream rng(3);
  const Commitment c = crypto::pedersen_commit(g.scalar(2), g.scalar(33), g);
  const Element a0 = g.pow_h(g.scalar(5));
  const Element a1 = g.pow_h(g.scalar(71));
  const Scalar challenge = g.scalar(40);
  const Element c1 = g.mul(c.element, g.inv(g.g()));

  std::vector<BitResponse> accepting;
  for (unsigned long e0 = 0; e0 < 101; ++e0) {
    const Scalar se0 = g.scalar(e0);
    const Scalar se1 = g.sub(challenge, se0);
    const Element rhs0 = g.mul(a0, g.pow(c.element, se0));
    const Element rhs1 = g.mul(a1, g.pow(c1, se1));
    std::vector<Scalar> z0s, z1s;
    for (unsigned long z = 0; z < 101; ++z) {
      const Element hz = g.pow_h(g.scalar(z));
      if (hz == rhs0) z0s.push_back(g.scalar(z));
      if (hz == rhs1) z1s.push_back(g.scalar(z));
    }
    REQUIRE(z0s.size() == 1);
    REQUIRE(z1s.size() == 1);
    const BitResponse resp{se0, se1, z0s[0], z1s[0]};
    REQUIRE(verify_bit_interactive(g, c, BitFirstMessage{a0, a1}, challenge, resp));
    accepting.push_back(resp);
  }
  CHECK(accepting.size() == 101);

  const unsigned long t = log_h(g, g.g());
  for (std::size_t i = 1; i < accepting.size(); ++i) {
    const auto& x = accepting[0];
    const auto& y = accepting[i];
    const Scalar w0 = g.mul(g.sub(x.z0, y.z0), g.inverse(g.sub(x.e0, y.e0)));
    const Scalar w1 = g.mul(g.sub(x.z1, y.z1), g.inverse(g.sub(x.e1, y.e1)));
    CHECK(g.sub(w0, w1).v == t);
  }
}

TEST_CASE("dlog session") {
  netsim::RngStream rng(4);
  const Group& g = Group::production();
  const Scalar x = g.random_scalar(rng);
  DlogProverSession s(g, x, rng);
  const Scalar c = g.random_scalar(rng);
  CHECK(verify_dlog_interactive(g, g.pow_h(x), s.first_message(), c, s.respond(c)));
  CHECK(!verify_dlog_interactive(g, g.pow_h(g.add(x, g.scalar(1))), s.first_message(), c, s.respond(c)));
}

TEST_CASE("weighted product by Horner equals the direct product") {
  const Group& g = Group::production();
  netsim::RngStream rng(5);
  std::vector<Commitment> cs;
  for (int i = 0; i < 9; ++i) cs.push_back({g.pow_g(g.random_scalar(rng))});
  Element direct = g.identity();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    direct = g.mul(direct, g.pow(cs[i].element, g.scalar(std::uint64_t{1} << i)));
  }
  CHECK(weighted_product(g, cs) == direct);
}

TEST_CASE("range sessions and the special-soundness extractor") {
  // 100 forked sessions: same first message, two independent challenge
  // vectors. The extracted (value, blinding) must match the prover's and
  // open the target, which brute force confirms.
  const Group& g = tiny();
  netsim::RngStream rng(6);
  unsigned long u = 0;  // log_G(H)
  while (!(g.pow_g(g.scalar(u)) == g.h())) ++u;
  for (int run = 0; run < 100; ++run) {
    const std::uint64_t v = rng.uniform_inclusive(31);
    const Scalar r = g.random_scalar(rng);
    const Commitment target = crypto::pedersen_commit(g.scalar(v), r, g);
    RangeProverSession s(g, g.scalar(v), r, 5, rng);
    const RangeFirstMessage& first = s.first_message();

    RangeChallenges c1, c2;
    for (int i = 0; i < 5; ++i) {
      const Scalar x = g.random_scalar(rng);
      c1.bit_challenges.push_back(x);
      c2.bit_challenges.push_back(g.add(x, g.scalar(1 + rng.uniform_inclusive(99))));
    }
    c1.aggregation_challenges = {g.random_scalar(rng)};
    c2.aggregation_challenges = {g.add(c1.aggregation_challenges[0], g.scalar(1 + rng.uniform_inclusive(99)))};
    const RangeResponse r1 = s.respond(c1);
    const RangeResponse r2 = s.respond(c2);
    REQUIRE(verify_range_interactive(g, target, first, c1, r1));
    REQUIRE(verify_range_interactive(g, target, first, c2, r2));

    std::uint64_t value = 0;
    Scalar blinding;
    for (int i = 0; i < 5; ++i) {
      const auto [b, ri] = extract_bit(g, r1.bit_responses[i], r2.bit_responses[i]);
      value += std::uint64_t{b} << i;
      blinding = g.add(blinding, g.mul(ri, g.scalar(std::uint64_t{1} << i)));
    }
    const Scalar x = g.mul(g.sub(r1.aggregation_s[0], r2.aggregation_s[0]),
                           g.inverse(g.sub(c1.aggregation_challenges[0], c2.aggregation_challenges[0])));
    blinding = g.add(blinding, x);

    CHECK(value == v);
    CHECK(blinding == r);
    // Brute-force opening: log_G(target) = v + u*r.
    BigInt acc = 1;
    unsigned long lg = 0;
    for (; lg < 101; ++lg, acc = acc * g.g().v % g.p()) {
      if (acc == target.element.v) break;
    }
    CHECK(lg == (value + u * blinding.v.get_ui()) % 101);
  }
}

TEST_CASE("range session argument checks") {
  netsim::RngStream rng(7);
  CHECK_THROWS_AS(RangeProverSession(tiny(), tiny().scalar(32), Scalar(), 5, rng), std::invalid_argument);
  CHECK_THROWS_AS(RangeProverSession(tiny(), tiny().scalar(0), Scalar(), 0, rng), std::invalid_argument);
}
