#pragma once

// Fiat–Shamir (non-interactive) bit and range proofs.
//
// Domain tags and contexts:
//   bit i        "ZTC/FS/bit"  over ctx || "bit" || u32(i) || C || a0 || a1
//   aggregation  "ZTC/FS/agg"  over ctx || "agg" || u32(k) || target || C_0..C_n-1 || A_k
// Every component of one range proof therefore hashes a distinct context.
//
// A single aggregation round has soundness error 1/q, which is large in the
// tiny group, so the round is repeated until q^rounds >= 2^40.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ztc/zkp/sigma.hpp"

namespace ztc::zkp {

inline constexpr std::string_view kBitTag = "ZTC/FS/bit";
inline constexpr std::string_view kAggregationTag = "ZTC/FS/agg";

struct BitProof {
  Element a0;
  Element a1;
  Scalar e0;
  Scalar e1;
  Scalar z0;
  Scalar z1;
};

struct AggregationProof {
  Element a;
  Scalar s;
};

struct RangeProof {
  std::uint32_t n_bits = 0;
  std::vector<Commitment> bit_commitments;
  std::vector<BitProof> bit_proofs;
  std::vector<AggregationProof> aggregation_blinding_proofs;
};

inline constexpr unsigned kAggregationSecurityBits = 40;
/// 1 in the production group.
std::size_t aggregation_rounds(const Group& group);

Bytes bit_context(ByteView context, std::uint32_t index);
Bytes aggregation_context(ByteView context, std::uint32_t round);

Scalar bit_challenge(const Group& group, ByteView bit_ctx, const Commitment& c,
                     const BitFirstMessage& first);
Scalar aggregation_challenge(const Group& group, ByteView agg_ctx, const Commitment& target,
                             const std::vector<Commitment>& bit_commitments, const Element& a);

std::pair<Commitment, BitProof> prove_bit(const Scalar& bit, const Scalar& blinding,
                                          ByteView context, const Group& group,
                                          netsim::RngStream& rng);
bool verify_bit(const Commitment& c, const BitProof& proof, ByteView context, const Group& group);

/// Throws std::invalid_argument when value >= 2^n_bits or the width is not
/// supported by the group.
RangeProof prove_range(const Scalar& value, const Scalar& blinding, std::size_t n_bits,
                       ByteView context, const Group& group, netsim::RngStream& rng);
bool verify_range(const Commitment& target, const RangeProof& proof, ByteView context,
                  const Group& group);

/// Splits a non-interactive proof back into its interactive transcript.
RangeFirstMessage first_message_of(const RangeProof& proof);
RangeResponse response_of(const RangeProof& proof);
RangeChallenges recompute_challenges(const Group& group, const Commitment& target,
                                     const RangeProof& proof, ByteView context);

// -- simulators (witness-free; tiny profile only, they search for a
//    challenge by rejection sampling over the q possible hash values) --

BitProof simulate_bit(const Commitment& c, ByteView context, const Group& group,
                      netsim::RngStream& rng);
AggregationProof simulate_aggregation(const Element& statement, ByteView agg_ctx,
                                      const Commitment& target,
                                      const std::vector<Commitment>& bit_commitments,
                                      const Group& group, netsim::RngStream& rng);

// -- wire encodings: length-prefixed fields in declaration order --

void encode(ByteWriter& w, const BitProof& p, const Group& group);
void encode(ByteWriter& w, const RangeProof& p, const Group& group);
Bytes encode_range_proof(const RangeProof& p, const Group& group);
BitProof decode_bit_proof(ByteView b, const Group& group);
RangeProof decode_range_proof(ByteView b, const Group& group);

}  // namespace ztc::zkp
