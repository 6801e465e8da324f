#include "ztc/zkp/sigma.hpp"

#include <stdexcept>

namespace ztc::zkp {

namespace {

bool in_field(const Group& group, const Scalar& s) { return s.v >= 0 && s.v < group.q(); }

// C * G^-j
Element branch_statement(const Group& group, const Commitment& c, int j) {
  if (j == 0) {
    return c.element;
  }
  return group.mul(c.element, group.inv(group.g()));
}

}  // namespace

BitProverSession::BitProverSession(const Group& group, const Scalar& bit, const Scalar& blinding,
                                   netsim::RngStream& rng)
    : group_(&group), blinding_(blinding), real_branch_(bit.v == 1 ? 1 : 0) {
  commitment_ = crypto::pedersen_commit(bit, blinding, group);
  nonce_ = group.random_scalar(rng);
  sim_challenge_ = group.random_scalar(rng);
  sim_response_ = group.random_scalar(rng);

  const int sim_branch = 1 - real_branch_;
  Element real_a = group.pow_h(nonce_);
  Element sim_y = branch_statement(group, commitment_, sim_branch);
  Element sim_a =
      group.mul(group.pow_h(sim_response_), group.pow(sim_y, group.neg(sim_challenge_)));
  if (real_branch_ == 0) {
    first_ = BitFirstMessage{std::move(real_a), std::move(sim_a)};
  } else {
    first_ = BitFirstMessage{std::move(sim_a), std::move(real_a)};
  }
}

BitResponse BitProverSession::respond(const Scalar& challenge) const {
  const Group& g = *group_;
  Scalar real_e = g.sub(challenge, sim_challenge_);
  Scalar real_z = g.add(nonce_, g.mul(real_e, blinding_));
  if (real_branch_ == 0) {
    return BitResponse{real_e, sim_challenge_, real_z, sim_response_};
  }
  return BitResponse{sim_challenge_, real_e, sim_response_, real_z};
}

bool verify_bit_interactive(const Group& group, const Commitment& c,
                            const BitFirstMessage& first, const Scalar& challenge,
                            const BitResponse& response) {
  if (!group.is_member(c.element) || !group.is_member(first.a0) ||
      !group.is_member(first.a1)) {
    return false;
  }
  for (const Scalar* s : {&response.e0, &response.e1, &response.z0, &response.z1, &challenge}) {
    if (!in_field(group, *s)) {
      return false;
    }
  }
  if (!(group.add(response.e0, response.e1) == challenge)) {
    return false;
  }
  const Element y0 = branch_statement(group, c, 0);
  const Element y1 = branch_statement(group, c, 1);
  return group.pow_h(response.z0) == group.mul(first.a0, group.pow(y0, response.e0)) &&
         group.pow_h(response.z1) == group.mul(first.a1, group.pow(y1, response.e1));
}

DlogProverSession::DlogProverSession(const Group& group, const Scalar& witness,
                                     netsim::RngStream& rng)
    : group_(&group), witness_(witness), nonce_(group.random_scalar(rng)) {
  a_ = group.pow_h(nonce_);
}

Scalar DlogProverSession::respond(const Scalar& challenge) const {
  return group_->add(nonce_, group_->mul(challenge, witness_));
}

bool verify_dlog_interactive(const Group& group, const Element& statement, const Element& a,
                             const Scalar& challenge, const Scalar& response) {
  if (!group.is_member(statement) || !group.is_member(a) || !in_field(group, challenge) ||
      !in_field(group, response)) {
    return false;
  }
  return group.pow_h(response) == group.mul(a, group.pow(statement, challenge));
}

RangeProverSession::RangeProverSession(const Group& group, const Scalar& value,
                                       const Scalar& blinding, std::size_t n_bits,
                                       netsim::RngStream& rng, std::size_t rounds)
    : group_(&group) {
  if (n_bits == 0 || n_bits > 64) {
    throw std::invalid_argument("range proof width must be in [1, 64]");
  }
  if (rounds == 0) {
    throw std::invalid_argument("at least one aggregation round is needed");
  }
  const crypto::BigInt bound = crypto::BigInt(1) << n_bits;
  if (bound > group.q()) {
    throw std::invalid_argument("range proof width exceeds the group order");
  }
  if (value.v < 0 || value.v >= bound) {
    throw std::invalid_argument("value outside [0, 2^n_bits)");
  }

  bits_.reserve(n_bits);
  Scalar weighted_blinding = group.scalar(0);
  for (std::size_t i = 0; i < n_bits; ++i) {
    const bool bit = mpz_tstbit(value.v.get_mpz_t(), i) != 0;
    Scalar r_i = group.random_scalar(rng);
    bits_.emplace_back(group, group.scalar(bit ? 1 : 0), r_i, rng);
    weighted_blinding =
        group.add(weighted_blinding, group.mul(r_i, group.reduce(crypto::BigInt(1) << i)));
  }
  const Scalar residue = group.sub(blinding, weighted_blinding);
  for (std::size_t k = 0; k < rounds; ++k) {
    aggregation_.emplace_back(group, residue, rng);
  }

  first_.bit_commitments.reserve(n_bits);
  first_.bit_messages.reserve(n_bits);
  for (const auto& s : bits_) {
    first_.bit_commitments.push_back(s.commitment());
    first_.bit_messages.push_back(s.first_message());
  }
  for (const auto& a : aggregation_) {
    first_.aggregation_a.push_back(a.first_message());
  }
}

RangeResponse RangeProverSession::respond(const RangeChallenges& challenges) const {
  if (challenges.bit_challenges.size() != bits_.size() ||
      challenges.aggregation_challenges.size() != aggregation_.size()) {
    throw std::invalid_argument("challenge count does not match the session");
  }
  RangeResponse out;
  out.bit_responses.reserve(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    out.bit_responses.push_back(bits_[i].respond(challenges.bit_challenges[i]));
  }
  for (std::size_t k = 0; k < aggregation_.size(); ++k) {
    out.aggregation_s.push_back(aggregation_[k].respond(challenges.aggregation_challenges[k]));
  }
  return out;
}

Element weighted_product(const Group& group, const std::vector<Commitment>& bit_commitments) {
  Element acc = group.identity();
  for (auto it = bit_commitments.rbegin(); it != bit_commitments.rend(); ++it) {
    acc = group.mul(group.mul(acc, acc), it->element);
  }
  return acc;
}

Element aggregation_statement(const Group& group, const Commitment& target,
                              const std::vector<Commitment>& bit_commitments) {
  return group.mul(target.element, group.inv(weighted_product(group, bit_commitments)));
}

bool verify_range_interactive(const Group& group, const Commitment& target,
                              const RangeFirstMessage& first,
                              const RangeChallenges& challenges,
                              const RangeResponse& response) {
  const std::size_t n = first.bit_commitments.size();
  if (n == 0 || n > 64 || first.bit_messages.size() != n ||
      challenges.bit_challenges.size() != n || response.bit_responses.size() != n) {
    return false;
  }
  const std::size_t rounds = first.aggregation_a.size();
  if (rounds == 0 || challenges.aggregation_challenges.size() != rounds ||
      response.aggregation_s.size() != rounds) {
    return false;
  }
  if (!group.is_member(target.element)) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!verify_bit_interactive(group, first.bit_commitments[i], first.bit_messages[i],
                                challenges.bit_challenges[i], response.bit_responses[i])) {
      return false;
    }
  }
  const Element statement = aggregation_statement(group, target, first.bit_commitments);
  for (std::size_t k = 0; k < rounds; ++k) {
    if (!verify_dlog_interactive(group, statement, first.aggregation_a[k],
                                 challenges.aggregation_challenges[k], response.aggregation_s[k])) {
      return false;
    }
  }
  return true;
}

}  // namespace ztc::zkp
