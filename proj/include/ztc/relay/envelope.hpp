#pragma once

#include <cstdint>
#include <optional>

#include "ztc/bridge/book.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/zkp/tx_proof.hpp"

namespace ztc::relay {

using ledger::ChainId;
using ledger::Transaction;
using ledger::TxHash;

enum class EnvelopeKind : std::uint8_t { XTransfer = 1, Receipt = 2, BridgeOp = 3 };
std::string_view envelope_kind_name(EnvelopeKind k);

/// Unit of cross-chain messaging. hop_count counts relay traversals; a
/// message is at most two hops (origin -> relay -> destination).
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::XTransfer;
  ChainId origin_chain;
  ChainId dest_chain;
  Bytes payload;
  std::uint32_t hop_count = 0;

  Bytes encode() const;
  static Envelope decode(ByteView bytes);
  Digest hash() const { return sha256(encode()); }

  bool operator==(const Envelope&) const = default;
};

/// Payload of XTransfer and BridgeOp envelopes.
struct TransferPayload {
  Transaction tx;
  zkp::TxValidityProof proof;
  std::optional<bridge::BridgeOp> op;
};

Bytes encode_transfer_payload(const TransferPayload& p, const crypto::Group& group);
/// Throws DecodeError. A BridgeOp is present iff `kind` is BridgeOp.
TransferPayload decode_transfer_payload(ByteView bytes, EnvelopeKind kind,
                                        const crypto::Group& group);

/// First-hop envelope for a transfer; BridgeOp kind iff the payload has an op.
Envelope make_transfer_envelope(const TransferPayload& p, const crypto::Group& group);

/// Outcome routed back to the origin. Destinations send it unsigned; the
/// relay signs tx_hash || result code before forwarding.
struct RelayReceipt {
  TxHash tx_hash;
  zkp::ValidityResult result = zkp::ValidityResult::valid();
  Bytes relay_signature;
};

Bytes encode_receipt(const RelayReceipt& r);
RelayReceipt decode_receipt(ByteView bytes);

}  // namespace ztc::relay
