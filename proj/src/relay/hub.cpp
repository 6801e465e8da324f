#include "ztc/relay/hub.hpp"

namespace ztc::relay {

RelayHub::RelayHub(const crypto::Group& group, crypto::Keypair operator_keys, std::uint64_t seed)
    : group_(&group),
      keys_(std::move(operator_keys)),
      sign_rng_(netsim::RngStream::fork(seed, "relay/sign")) {}

void RelayHub::register_chain(const ChainId& id, std::string net_address, ReceiverPolicy policy,
                              const ledger::PublicBoard* board) {
  if (routes_.contains(id)) {
    throw DuplicateChain("chain " + id.hex() + " already registered");
  }
  routes_.emplace(id, Route{std::move(net_address), std::move(policy), board});
}

const std::string& RelayHub::net_address(const ChainId& id) const {
  auto it = routes_.find(id);
  if (it == routes_.end()) {
    throw std::out_of_range("chain not routable");
  }
  return it->second.net_address;
}

RelayReceipt RelayHub::sign_receipt(const TxHash& h, const ValidityResult& r) {
  RelayReceipt rc{h, r, {}};
  rc.relay_signature = crypto::encode_signature(
      crypto::schnorr_sign(keys_.sk, ledger::receipt_message(h, r), *group_, sign_rng_), *group_);
  return rc;
}

void RelayHub::reject(IngressOutcome& o, const ChainId& origin, InvalidReason reason) {
  o.result = ValidityResult::invalid(reason);
  if (!o.tx_hash || !routes_.contains(origin)) {
    // Nowhere to send a receipt; the origin's escrow times out.
    return;
  }
  o.receipt = sign_receipt(*o.tx_hash, o.result);
  Envelope back;
  back.kind = EnvelopeKind::Receipt;
  back.origin_chain = o.transfer ? o.transfer->tx.dest_chain : origin;
  back.dest_chain = origin;
  back.payload = encode_receipt(*o.receipt);
  back.hop_count = 2;
  o.out.push_back(Outbound{origin, std::move(back)});
}

IngressOutcome RelayHub::ingress(const Envelope& env, const std::optional<ChainId>& from) {
  if (env.kind == EnvelopeKind::Receipt) {
    return receipt_ingress(env, from);
  }
  return transfer_ingress(env, from);
}

IngressOutcome RelayHub::transfer_ingress(const Envelope& env, const std::optional<ChainId>& from) {
  IngressOutcome o;
  o.kind = IngressKind::Transfer;
  try {
    o.transfer = decode_transfer_payload(env.payload, env.kind, *group_);
  } catch (const DecodeError&) {
    o.kind = IngressKind::Undeliverable;
    o.result = ValidityResult::invalid(InvalidReason::MalformedProof);
    return o;
  }
  const Transaction& tx = o.transfer->tx;
  o.tx_hash = tx.hash();

  if (!from || !routes_.contains(*from)) {
    // No receipt: the claimed origin did not send this, and a rejection
    // would refund an escrow its genuine envelope may still settle.
    o.result = ValidityResult::invalid(InvalidReason::UnknownChain);
    return o;
  }
  if (env.origin_chain != *from || tx.origin_chain != *from || env.hop_count != 1 ||
      env.dest_chain != tx.dest_chain) {
    reject(o, *from, InvalidReason::MalformedProof);
    return o;
  }
  auto dest = routes_.find(tx.dest_chain);
  if (dest == routes_.end()) {
    reject(o, *from, InvalidReason::UnknownChain);
    return o;
  }
  if (seen_.contains({tx.origin_chain, tx.sender, tx.nonce})) {
    reject(o, *from, InvalidReason::ReplayedNonce);
    return o;
  }

  const ledger::PublicBoard* board = routes_.at(*from).board;
  o.commitment = board->commitment(tx.sender, tx.asset, tx.nonce);
  o.sender_pk = board->key(tx.sender);
  if (!o.commitment) {
    o.proof_check = ValidityResult::invalid(InvalidReason::MalformedProof);
  } else {
    o.proof_check = zkp::verify_tx_proof(tx, *o.commitment, o.transfer->proof, o.sender_pk, *group_);
  }
  if (!o.proof_check->is_valid()) {
    reject(o, *from, *o.proof_check->reason());
    return o;
  }
  if (o.transfer->op && !bridge::consistent(*o.transfer->op, tx)) {
    reject(o, *from, InvalidReason::MalformedProof);
    return o;
  }
  if (!dest->second.policy.allows(tx.receiver)) {
    reject(o, *from, InvalidReason::UnauthorizedRecipient);
    return o;
  }

  seen_.insert({tx.origin_chain, tx.sender, tx.nonce});
  pending_.insert_or_assign(*o.tx_hash, Pending{tx.origin_chain, tx.dest_chain});
  Envelope fwd = env;
  fwd.hop_count = 2;
  o.out.push_back(Outbound{tx.dest_chain, std::move(fwd)});
  return o;
}

IngressOutcome RelayHub::receipt_ingress(const Envelope& env, const std::optional<ChainId>& from) {
  IngressOutcome o;
  o.kind = IngressKind::UnknownReceipt;
  RelayReceipt rc;
  try {
    rc = decode_receipt(env.payload);
  } catch (const DecodeError&) {
    return o;
  }
  o.tx_hash = rc.tx_hash;
  o.result = rc.result;
  auto it = pending_.find(rc.tx_hash);
  if (it == pending_.end() || !from || it->second.dest != *from || env.hop_count != 1) {
    return o;
  }
  const ChainId origin = it->second.origin;
  pending_.erase(it);

  o.kind = IngressKind::ReceiptForwarded;
  o.receipt = sign_receipt(rc.tx_hash, rc.result);
  Envelope back;
  back.kind = EnvelopeKind::Receipt;
  back.origin_chain = *from;
  back.dest_chain = origin;
  back.payload = encode_receipt(*o.receipt);
  back.hop_count = 2;
  o.out.push_back(Outbound{origin, std::move(back)});
  return o;
}

}  // namespace ztc::relay
