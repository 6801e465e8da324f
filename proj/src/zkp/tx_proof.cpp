#include "ztc/zkp/tx_proof.hpp"

#include <array>

namespace ztc::zkp {

namespace {

constexpr std::array<std::pair<InvalidReason, std::string_view>, 7> kReasonNames{{
    {InvalidReason::NotEnoughBalance, "NotEnoughBalance"},
    {InvalidReason::InvalidSignature, "InvalidSignature"},
    {InvalidReason::ExecutionFailed, "ExecutionFailed"},
    {InvalidReason::MalformedProof, "MalformedProof"},
    {InvalidReason::ReplayedNonce, "ReplayedNonce"},
    {InvalidReason::UnknownChain, "UnknownChain"},
    {InvalidReason::UnauthorizedRecipient, "UnauthorizedRecipient"},
}};

Scalar debit_of(const ledger::Transaction& tx, const Group& group) {
  return group.add(group.scalar(tx.amount), group.scalar(tx.fee));
}

}  // namespace

std::string_view reason_name(InvalidReason r) {
  for (const auto& [reason, name] : kReasonNames) {
    if (reason == r) return name;
  }
  return "Unknown";
}

std::optional<InvalidReason> parse_reason(std::string_view name) {
  for (const auto& [reason, n] : kReasonNames) {
    if (n == name) return reason;
  }
  return std::nullopt;
}

std::string ValidityResult::to_string() const {
  return reason_ ? std::string(reason_name(*reason_)) : std::string("Valid");
}

ValidityResult ValidityResult::parse(std::string_view s) {
  if (s == "Valid") {
    return valid();
  }
  if (auto r = parse_reason(s)) {
    return invalid(*r);
  }
  throw std::invalid_argument("unknown validity result: " + std::string(s));
}

ValidityResult ValidityResult::from_code(std::uint8_t code) {
  if (code == 0) {
    return valid();
  }
  if (code > static_cast<std::uint8_t>(InvalidReason::UnauthorizedRecipient)) {
    throw DecodeError("unknown validity code");
  }
  return invalid(static_cast<InvalidReason>(code));
}

std::size_t protocol_range_bits(crypto::Profile profile) {
  return profile == crypto::Profile::Production ? 64 : 6;
}

Bytes range_context(const Digest& binding_hash) {
  ByteWriter w;
  w.put_lp("tx-range");
  w.put_lp(binding_hash);
  return w.take();
}

TxValidityProof generate_tx_proof(const ledger::Transaction& tx, const Scalar& sender_sk,
                                  std::uint64_t balance, const Scalar& balance_blinding,
                                  const Group& group, netsim::RngStream& rng) {
  const crypto::Keypair keys = crypto::Keypair::from_secret(sender_sk, group);
  if (ledger::address_of(keys.pk, group) != tx.sender) {
    throw ProofError(ProofError::Code::KeyMismatch, "sender key does not match tx.sender");
  }
  if (tx.amount > balance || tx.fee > balance - tx.amount) {
    throw ProofError(ProofError::Code::NotEnoughBalance, "balance below amount + fee");
  }
  const std::uint64_t remaining = balance - tx.amount - tx.fee;

  TxValidityProof proof;
  proof.binding_hash = tx.hash().bytes;
  proof.balance_commitment = crypto::pedersen_commit(group.scalar(balance), balance_blinding, group);
  const Bytes ctx = range_context(proof.binding_hash);
  proof.range_proof = prove_range(group.scalar(remaining), balance_blinding,
                                  protocol_range_bits(group.profile()), ctx, group, rng);
  proof.auth_signature = crypto::schnorr_sign(sender_sk, proof.binding_hash, group, rng);
  return proof;
}

ValidityResult verify_tx_proof(const ledger::Transaction& tx,
                               const Commitment& published_commitment,
                               const TxValidityProof& proof,
                               const std::optional<Element>& sender_pk, const Group& group) {
  if (tx.hash().bytes != proof.binding_hash) {
    return ValidityResult::invalid(InvalidReason::MalformedProof);
  }
  if (!(proof.balance_commitment == published_commitment)) {
    return ValidityResult::invalid(InvalidReason::MalformedProof);
  }
  if (!sender_pk || !group.is_member(*sender_pk) ||
      ledger::address_of(*sender_pk, group) != tx.sender ||
      !crypto::schnorr_verify(*sender_pk, proof.binding_hash, proof.auth_signature, group) ||
      !crypto::schnorr_verify_bytes(*sender_pk, proof.binding_hash, tx.signature, group)) {
    return ValidityResult::invalid(InvalidReason::InvalidSignature);
  }
  if (proof.range_proof.n_bits != protocol_range_bits(group.profile())) {
    return ValidityResult::invalid(InvalidReason::MalformedProof);
  }
  const Commitment target = crypto::commit_sub_public(published_commitment, debit_of(tx, group), group);
  if (!verify_range(target, proof.range_proof, range_context(proof.binding_hash), group)) {
    return ValidityResult::invalid(InvalidReason::NotEnoughBalance);
  }
  return ValidityResult::valid();
}

TxValidityProof simulate_tx_proof(const ledger::Transaction& tx,
                                  const Commitment& published_commitment,
                                  const Element& sender_pk, const Group& group,
                                  netsim::RngStream& rng) {
  if (group.profile() != crypto::Profile::Tiny) {
    throw std::logic_error("simulate_tx_proof is a tiny-profile test tool");
  }
  TxValidityProof proof;
  proof.binding_hash = tx.hash().bytes;
  proof.balance_commitment = published_commitment;

  const Bytes ctx = range_context(proof.binding_hash);
  const Commitment target = crypto::commit_sub_public(published_commitment, debit_of(tx, group), group);
  const std::size_t n = protocol_range_bits(group.profile());

  RangeProof& rp = proof.range_proof;
  rp.n_bits = static_cast<std::uint32_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    rp.bit_commitments.push_back(Commitment{group.pow_h(group.random_scalar(rng))});
  }
  for (std::size_t i = 0; i < n; ++i) {
    rp.bit_proofs.push_back(simulate_bit(rp.bit_commitments[i],
                                         bit_context(ctx, static_cast<std::uint32_t>(i)), group,
                                         rng));
  }
  const Element statement = aggregation_statement(group, target, rp.bit_commitments);
  for (std::size_t k = 0; k < aggregation_rounds(group); ++k) {
    rp.aggregation_blinding_proofs.push_back(
        simulate_aggregation(statement, aggregation_context(ctx, static_cast<std::uint32_t>(k)), target,
                             rp.bit_commitments, group, rng));
  }

  for (int attempt = 0; attempt < (1 << 16); ++attempt) {
    Scalar e = group.random_scalar(rng);
    Scalar s = group.random_scalar(rng);
    Element r = group.mul(group.pow_g(s), group.pow(sender_pk, group.neg(e)));
    if (crypto::signature_challenge(r, sender_pk, proof.binding_hash, group) == e) {
      proof.auth_signature = crypto::Signature{r, s};
      return proof;
    }
  }
  throw std::runtime_error("signature simulation did not converge");
}

std::vector<std::pair<std::string, Bytes>> fiat_shamir_contexts(const TxValidityProof& proof) {
  std::vector<std::pair<std::string, Bytes>> out;
  out.emplace_back(std::string(crypto::kSignatureTag),
                   Bytes(proof.binding_hash.begin(), proof.binding_hash.end()));
  const Bytes ctx = range_context(proof.binding_hash);
  for (std::uint32_t i = 0; i < proof.range_proof.bit_proofs.size(); ++i) {
    out.emplace_back(std::string(kBitTag), bit_context(ctx, i));
  }
  for (std::uint32_t k = 0; k < proof.range_proof.aggregation_blinding_proofs.size(); ++k) {
    out.emplace_back(std::string(kAggregationTag), aggregation_context(ctx, k));
  }
  return out;
}

Bytes encode_tx_proof(const TxValidityProof& proof, const Group& group) {
  ByteWriter w;
  w.put_lp(group.encode(proof.balance_commitment.element));
  w.put_lp(encode_range_proof(proof.range_proof, group));
  w.put_lp(crypto::encode_signature(proof.auth_signature, group));
  w.put_lp(proof.binding_hash);
  return w.take();
}

TxValidityProof decode_tx_proof(ByteView bytes, const Group& group) {
  ByteReader r(bytes);
  TxValidityProof proof;
  proof.balance_commitment = Commitment{group.decode_element(r.get_lp())};
  proof.range_proof = decode_range_proof(r.get_lp(), group);
  proof.auth_signature = crypto::decode_signature(r.get_lp(), group);
  ByteView h = r.get_lp();
  if (h.size() != proof.binding_hash.size()) {
    throw DecodeError("binding hash must be 32 bytes");
  }
  std::copy(h.begin(), h.end(), proof.binding_hash.begin());
  r.expect_done();
  return proof;
}

}  // namespace ztc::zkp
