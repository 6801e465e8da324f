#pragma once

// Interactive three-move forms of the proofs used by the range proof.
//
// The non-interactive proofs in proofs.hpp are these sessions with the
// challenge replaced by a hash. Keeping the interactive form public lets tests
// fork a session at the challenge and run the special-soundness extractor.

#include <vector>

#include "ztc/crypto/group.hpp"

namespace ztc::zkp {

using crypto::Commitment;
using crypto::Element;
using crypto::Group;
using crypto::Scalar;

// ---------------------------------------------------------------------------
// OR-proof that C = G^b H^r with b in {0, 1} (CDS composition over two
// Schnorr proofs of log_H(C * G^-j)).

struct BitFirstMessage {
  Element a0;
  Element a1;
};

struct BitResponse {
  Scalar e0;
  Scalar e1;
  Scalar z0;
  Scalar z1;
};

class BitProverSession {
 public:
  /// bit outside {0, 1} is accepted and yields a transcript that does not
  /// verify.
  BitProverSession(const Group& group, const Scalar& bit, const Scalar& blinding,
                   netsim::RngStream& rng);

  const Commitment& commitment() const { return commitment_; }
  const BitFirstMessage& first_message() const { return first_; }
  BitResponse respond(const Scalar& challenge) const;

 private:
  const Group* group_;
  Scalar blinding_;
  int real_branch_;
  Scalar nonce_;
  Scalar sim_challenge_;
  Scalar sim_response_;
  Commitment commitment_;
  BitFirstMessage first_;
};

/// Checks e0 + e1 = challenge and H^zj = aj * (C G^-j)^ej for j = 0, 1.
bool verify_bit_interactive(const Group& group, const Commitment& c,
                            const BitFirstMessage& first, const Scalar& challenge,
                            const BitResponse& response);

// ---------------------------------------------------------------------------
// Schnorr proof of knowledge of x with Y = H^x.

class DlogProverSession {
 public:
  DlogProverSession(const Group& group, const Scalar& witness, netsim::RngStream& rng);

  const Element& first_message() const { return a_; }
  Scalar respond(const Scalar& challenge) const;

 private:
  const Group* group_;
  Scalar witness_;
  Scalar nonce_;
  Element a_;
};

bool verify_dlog_interactive(const Group& group, const Element& statement, const Element& a,
                             const Scalar& challenge, const Scalar& response);

// ---------------------------------------------------------------------------
// Bit-decomposition range proof: per-bit OR proofs plus Schnorr proofs that
// target / prod C_i^(2^i) is a known power of H. The aggregation proof may be
// repeated in parallel to shrink its soundness error in small groups.

struct RangeFirstMessage {
  std::vector<Commitment> bit_commitments;
  std::vector<BitFirstMessage> bit_messages;
  std::vector<Element> aggregation_a;  // one per round
};

struct RangeChallenges {
  std::vector<Scalar> bit_challenges;
  std::vector<Scalar> aggregation_challenges;
};

struct RangeResponse {
  std::vector<BitResponse> bit_responses;
  std::vector<Scalar> aggregation_s;
};

class RangeProverSession {
 public:
  /// Requires 1 <= n_bits <= 64, value < 2^n_bits and rounds >= 1; throws
  /// std::invalid_argument otherwise.
  RangeProverSession(const Group& group, const Scalar& value, const Scalar& blinding,
                     std::size_t n_bits, netsim::RngStream& rng, std::size_t rounds = 1);

  std::size_t n_bits() const { return bits_.size(); }
  const RangeFirstMessage& first_message() const { return first_; }
  RangeResponse respond(const RangeChallenges& challenges) const;

 private:
  const Group* group_;
  std::vector<BitProverSession> bits_;
  std::vector<DlogProverSession> aggregation_;
  RangeFirstMessage first_;
};

/// prod_i C_i^(2^i), evaluated by Horner's rule.
Element weighted_product(const Group& group, const std::vector<Commitment>& bit_commitments);

/// target * (prod C_i^(2^i))^-1, the statement of the aggregation proof.
Element aggregation_statement(const Group& group, const Commitment& target,
                              const std::vector<Commitment>& bit_commitments);

bool verify_range_interactive(const Group& group, const Commitment& target,
                              const RangeFirstMessage& first,
                              const RangeChallenges& challenges,
                              const RangeResponse& response);

}  // namespace ztc::zkp
