#include "ztc/zkp/proofs.hpp"

#include <stdexcept>

namespace ztc::zkp {

namespace {

constexpr int kMaxSimulationAttempts = 1 << 16;

void require_tiny(const Group& group) {
  if (group.profile() != crypto::Profile::Tiny) {
    throw std::logic_error("simulators are only available in the tiny profile");
  }
}

Bytes lp_list_bytes(const std::vector<Bytes>& items) {
  ByteWriter w;
  w.put_u32(static_cast<std::uint32_t>(items.size()));
  for (const auto& it : items) {
    w.put_lp(it);
  }
  return w.take();
}

std::vector<ByteView> read_lp_list(ByteView b, std::size_t max_items) {
  ByteReader r(b);
  std::uint32_t n = r.get_u32();
  if (n > max_items) {
    throw DecodeError("list too long");
  }
  std::vector<ByteView> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out.push_back(r.get_lp());
  }
  r.expect_done();
  return out;
}

}  // namespace

Bytes bit_context(ByteView context, std::uint32_t index) {
  ByteWriter w;
  w.put_lp(context);
  w.put_raw(as_bytes("bit"));
  w.put_u32(index);
  return w.take();
}

std::size_t aggregation_rounds(const Group& group) {
  const std::size_t bits_per_round = mpz_sizeinbase(group.q().get_mpz_t(), 2) - 1;
  return (kAggregationSecurityBits + bits_per_round - 1) / bits_per_round;
}

Bytes aggregation_context(ByteView context, std::uint32_t round) {
  ByteWriter w;
  w.put_lp(context);
  w.put_raw(as_bytes("agg"));
  w.put_u32(round);
  return w.take();
}

Scalar bit_challenge(const Group& group, ByteView bit_ctx, const Commitment& c,
                     const BitFirstMessage& first) {
  ByteWriter w;
  w.put_raw(bit_ctx);
  group.encode(w, c.element);
  group.encode(w, first.a0);
  group.encode(w, first.a1);
  return group.hash_to_scalar(kBitTag, w.bytes());
}

Scalar aggregation_challenge(const Group& group, ByteView agg_ctx, const Commitment& target,
                             const std::vector<Commitment>& bit_commitments, const Element& a) {
  ByteWriter w;
  w.put_raw(agg_ctx);
  group.encode(w, target.element);
  for (const auto& c : bit_commitments) {
    group.encode(w, c.element);
  }
  group.encode(w, a);
  return group.hash_to_scalar(kAggregationTag, w.bytes());
}

std::pair<Commitment, BitProof> prove_bit(const Scalar& bit, const Scalar& blinding,
                                          ByteView context, const Group& group,
                                          netsim::RngStream& rng) {
  BitProverSession session(group, bit, blinding, rng);
  const auto& first = session.first_message();
  Scalar e = bit_challenge(group, context, session.commitment(), first);
  BitResponse resp = session.respond(e);
  return {session.commitment(),
          BitProof{first.a0, first.a1, resp.e0, resp.e1, resp.z0, resp.z1}};
}

bool verify_bit(const Commitment& c, const BitProof& proof, ByteView context, const Group& group) {
  BitFirstMessage first{proof.a0, proof.a1};
  if (!group.is_member(first.a0) || !group.is_member(first.a1) || !group.is_member(c.element)) {
    return false;
  }
  Scalar e = bit_challenge(group, context, c, first);
  return verify_bit_interactive(group, c, first, e,
                                BitResponse{proof.e0, proof.e1, proof.z0, proof.z1});
}

RangeProof prove_range(const Scalar& value, const Scalar& blinding, std::size_t n_bits,
                       ByteView context, const Group& group, netsim::RngStream& rng) {
  const std::size_t rounds = aggregation_rounds(group);
  RangeProverSession session(group, value, blinding, n_bits, rng, rounds);
  const RangeFirstMessage& first = session.first_message();
  const Commitment target = crypto::pedersen_commit(value, blinding, group);

  RangeChallenges ch;
  ch.bit_challenges.reserve(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    Bytes ctx = bit_context(context, static_cast<std::uint32_t>(i));
    ch.bit_challenges.push_back(
        bit_challenge(group, ctx, first.bit_commitments[i], first.bit_messages[i]));
  }
  for (std::size_t k = 0; k < rounds; ++k) {
    ch.aggregation_challenges.push_back(
        aggregation_challenge(group, aggregation_context(context, static_cast<std::uint32_t>(k)),
                              target, first.bit_commitments, first.aggregation_a[k]));
  }
  RangeResponse resp = session.respond(ch);

  RangeProof out;
  out.n_bits = static_cast<std::uint32_t>(n_bits);
  out.bit_commitments = first.bit_commitments;
  out.bit_proofs.reserve(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    const auto& m = first.bit_messages[i];
    const auto& r = resp.bit_responses[i];
    out.bit_proofs.push_back(BitProof{m.a0, m.a1, r.e0, r.e1, r.z0, r.z1});
  }
  for (std::size_t k = 0; k < rounds; ++k) {
    out.aggregation_blinding_proofs.push_back(AggregationProof{first.aggregation_a[k], resp.aggregation_s[k]});
  }
  return out;
}

RangeFirstMessage first_message_of(const RangeProof& proof) {
  RangeFirstMessage first;
  first.bit_commitments = proof.bit_commitments;
  first.bit_messages.reserve(proof.bit_proofs.size());
  for (const auto& bp : proof.bit_proofs) {
    first.bit_messages.push_back(BitFirstMessage{bp.a0, bp.a1});
  }
  for (const auto& ap : proof.aggregation_blinding_proofs) {
    first.aggregation_a.push_back(ap.a);
  }
  return first;
}

RangeResponse response_of(const RangeProof& proof) {
  RangeResponse resp;
  resp.bit_responses.reserve(proof.bit_proofs.size());
  for (const auto& bp : proof.bit_proofs) {
    resp.bit_responses.push_back(BitResponse{bp.e0, bp.e1, bp.z0, bp.z1});
  }
  for (const auto& ap : proof.aggregation_blinding_proofs) {
    resp.aggregation_s.push_back(ap.s);
  }
  return resp;
}

RangeChallenges recompute_challenges(const Group& group, const Commitment& target,
                                     const RangeProof& proof, ByteView context) {
  RangeChallenges ch;
  const std::size_t n = std::min(proof.bit_commitments.size(), proof.bit_proofs.size());
  ch.bit_challenges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Bytes ctx = bit_context(context, static_cast<std::uint32_t>(i));
    BitFirstMessage m{proof.bit_proofs[i].a0, proof.bit_proofs[i].a1};
    ch.bit_challenges.push_back(bit_challenge(group, ctx, proof.bit_commitments[i], m));
  }
  for (std::size_t k = 0; k < proof.aggregation_blinding_proofs.size(); ++k) {
    ch.aggregation_challenges.push_back(
        aggregation_challenge(group, aggregation_context(context, static_cast<std::uint32_t>(k)),
                              target, proof.bit_commitments, proof.aggregation_blinding_proofs[k].a));
  }
  return ch;
}

bool verify_range(const Commitment& target, const RangeProof& proof, ByteView context,
                  const Group& group) {
  const std::size_t n = proof.n_bits;
  if (n == 0 || n > 64 || proof.bit_commitments.size() != n || proof.bit_proofs.size() != n) {
    return false;
  }
  if (proof.aggregation_blinding_proofs.size() != aggregation_rounds(group) ||
      !group.is_member(target.element)) {
    return false;
  }
  for (const auto& ap : proof.aggregation_blinding_proofs) {
    if (!group.is_member(ap.a)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& bp = proof.bit_proofs[i];
    if (!group.is_member(proof.bit_commitments[i].element) || !group.is_member(bp.a0) ||
        !group.is_member(bp.a1)) {
      return false;
    }
  }
  return verify_range_interactive(group, target, first_message_of(proof),
                                  recompute_challenges(group, target, proof, context),
                                  response_of(proof));
}

BitProof simulate_bit(const Commitment& c, ByteView context, const Group& group,
                      netsim::RngStream& rng) {
  require_tiny(group);
  const Element y1 = group.mul(c.element, group.inv(group.g()));
  for (int attempt = 0; attempt < kMaxSimulationAttempts; ++attempt) {
    BitProof p;
    p.e0 = group.random_scalar(rng);
    p.e1 = group.random_scalar(rng);
    p.z0 = group.random_scalar(rng);
    p.z1 = group.random_scalar(rng);
    p.a0 = group.mul(group.pow_h(p.z0), group.pow(c.element, group.neg(p.e0)));
    p.a1 = group.mul(group.pow_h(p.z1), group.pow(y1, group.neg(p.e1)));
    if (bit_challenge(group, context, c, BitFirstMessage{p.a0, p.a1}) == group.add(p.e0, p.e1)) {
      return p;
    }
  }
  throw std::runtime_error("bit simulation did not converge");
}

AggregationProof simulate_aggregation(const Element& statement, ByteView agg_ctx,
                                      const Commitment& target,
                                      const std::vector<Commitment>& bit_commitments,
                                      const Group& group, netsim::RngStream& rng) {
  require_tiny(group);
  for (int attempt = 0; attempt < kMaxSimulationAttempts; ++attempt) {
    Scalar c = group.random_scalar(rng);
    Scalar s = group.random_scalar(rng);
    Element a = group.mul(group.pow_h(s), group.pow(statement, group.neg(c)));
    if (aggregation_challenge(group, agg_ctx, target, bit_commitments, a) == c) {
      return AggregationProof{a, s};
    }
  }
  throw std::runtime_error("aggregation simulation did not converge");
}

void encode(ByteWriter& w, const BitProof& p, const Group& group) {
  w.put_lp(group.encode(p.a0));
  w.put_lp(group.encode(p.a1));
  w.put_lp(group.encode(p.e0));
  w.put_lp(group.encode(p.e1));
  w.put_lp(group.encode(p.z0));
  w.put_lp(group.encode(p.z1));
}

void encode(ByteWriter& w, const RangeProof& p, const Group& group) {
  ByteWriter n;
  n.put_u32(p.n_bits);
  w.put_lp(n.bytes());

  std::vector<Bytes> commitments;
  commitments.reserve(p.bit_commitments.size());
  for (const auto& c : p.bit_commitments) {
    commitments.push_back(group.encode(c.element));
  }
  w.put_lp(lp_list_bytes(commitments));

  std::vector<Bytes> bits;
  bits.reserve(p.bit_proofs.size());
  for (const auto& bp : p.bit_proofs) {
    ByteWriter bw;
    encode(bw, bp, group);
    bits.push_back(bw.take());
  }
  w.put_lp(lp_list_bytes(bits));

  std::vector<Bytes> aggs;
  aggs.reserve(p.aggregation_blinding_proofs.size());
  for (const auto& ap : p.aggregation_blinding_proofs) {
    ByteWriter aw;
    aw.put_lp(group.encode(ap.a));
    aw.put_lp(group.encode(ap.s));
    aggs.push_back(aw.take());
  }
  w.put_lp(lp_list_bytes(aggs));
}

Bytes encode_range_proof(const RangeProof& p, const Group& group) {
  ByteWriter w;
  encode(w, p, group);
  return w.take();
}

BitProof decode_bit_proof(ByteView b, const Group& group) {
  ByteReader r(b);
  BitProof p;
  p.a0 = group.decode_element(r.get_lp());
  p.a1 = group.decode_element(r.get_lp());
  p.e0 = group.decode_scalar(r.get_lp());
  p.e1 = group.decode_scalar(r.get_lp());
  p.z0 = group.decode_scalar(r.get_lp());
  p.z1 = group.decode_scalar(r.get_lp());
  r.expect_done();
  return p;
}

RangeProof decode_range_proof(ByteView b, const Group& group) {
  ByteReader r(b);
  RangeProof p;
  {
    ByteReader n(r.get_lp());
    p.n_bits = n.get_u32();
    n.expect_done();
  }
  for (ByteView c : read_lp_list(r.get_lp(), 64)) {
    p.bit_commitments.push_back(Commitment{group.decode_element(c)});
  }
  for (ByteView bp : read_lp_list(r.get_lp(), 64)) {
    p.bit_proofs.push_back(decode_bit_proof(bp, group));
  }
  for (ByteView ap : read_lp_list(r.get_lp(), 64)) {
    ByteReader agg(ap);
    AggregationProof a;
    a.a = group.decode_element(agg.get_lp());
    a.s = group.decode_scalar(agg.get_lp());
    agg.expect_done();
    p.aggregation_blinding_proofs.push_back(std::move(a));
  }
  r.expect_done();
  return p;
}

}  // namespace ztc::zkp
