#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ztc/crypto/schnorr.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/zkp/proofs.hpp"

namespace ztc::zkp {

enum class InvalidReason : std::uint8_t {
  NotEnoughBalance = 1,
  InvalidSignature = 2,
  ExecutionFailed = 3,
  MalformedProof = 4,
  ReplayedNonce = 5,
  UnknownChain = 6,
  UnauthorizedRecipient = 7,
};

std::string_view reason_name(InvalidReason r);
std::optional<InvalidReason> parse_reason(std::string_view name);

class ValidityResult {
 public:
  static ValidityResult valid() { return ValidityResult(std::nullopt); }
  static ValidityResult invalid(InvalidReason r) { return ValidityResult(r); }

  bool is_valid() const { return !reason_.has_value(); }
  std::optional<InvalidReason> reason() const { return reason_; }

  /// "Valid" or the reason name.
  std::string to_string() const;
  static ValidityResult parse(std::string_view s);

  /// One byte: 0 for Valid, otherwise the reason code.
  std::uint8_t code() const { return reason_ ? static_cast<std::uint8_t>(*reason_) : 0; }
  static ValidityResult from_code(std::uint8_t code);

  bool operator==(const ValidityResult&) const = default;

 private:
  explicit ValidityResult(std::optional<InvalidReason> r) : reason_(r) {}
  std::optional<InvalidReason> reason_;
};

/// Everything the relay and the destination check for one transfer.
struct TxValidityProof {
  Commitment balance_commitment;
  RangeProof range_proof;
  crypto::Signature auth_signature;
  Digest binding_hash{};
};

/// Prover-side refusal.
class ProofError : public std::runtime_error {
 public:
  enum class Code { NotEnoughBalance, KeyMismatch };

  ProofError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// 64 for production, 6 for the tiny group (values must stay below q = 101).
std::size_t protocol_range_bits(crypto::Profile profile);

/// Context every range-proof challenge of a transaction is bound to.
Bytes range_context(const Digest& binding_hash);

/// Proves balance - amount - fee in [0, 2^n) against
/// commit(balance, blinding) * G^-(amount + fee), and signs the tx hash.
TxValidityProof generate_tx_proof(const ledger::Transaction& tx, const Scalar& sender_sk,
                                  std::uint64_t balance, const Scalar& balance_blinding,
                                  const Group& group, netsim::RngStream& rng);

/// Total over untrusted input. Check order: binding hash and commitment
/// (MalformedProof), sender key and both signatures (InvalidSignature), range
/// proof (NotEnoughBalance).
ValidityResult verify_tx_proof(const ledger::Transaction& tx,
                               const Commitment& published_commitment,
                               const TxValidityProof& proof,
                               const std::optional<Element>& sender_pk, const Group& group);

/// Accepting proof built without balance, blinding or secret key. Tiny
/// profile only.
TxValidityProof simulate_tx_proof(const ledger::Transaction& tx,
                                  const Commitment& published_commitment,
                                  const Element& sender_pk, const Group& group,
                                  netsim::RngStream& rng);

/// (domain tag, context) of every Fiat–Shamir challenge inside a proof.
std::vector<std::pair<std::string, Bytes>> fiat_shamir_contexts(const TxValidityProof& proof);

Bytes encode_tx_proof(const TxValidityProof& proof, const Group& group);
/// Throws DecodeError on malformed input.
TxValidityProof decode_tx_proof(ByteView bytes, const Group& group);

}  // namespace ztc::zkp
