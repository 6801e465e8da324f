#include "ztc/relay/envelope.hpp"

namespace ztc::relay {

std::string_view envelope_kind_name(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::XTransfer:
      return "XTransfer";
    case EnvelopeKind::Receipt:
      return "Receipt";
    case EnvelopeKind::BridgeOp:
      return "BridgeOp";
  }
  return "?";
}

Bytes Envelope::encode() const {
  ByteWriter w;
  const std::uint8_t k = static_cast<std::uint8_t>(kind);
  w.put_lp(ByteView(&k, 1));
  w.put_lp(origin_chain.view());
  w.put_lp(dest_chain.view());
  w.put_lp(payload);
  ByteWriter hops;
  hops.put_u32(hop_count);
  w.put_lp(hops.bytes());
  return w.take();
}

Envelope Envelope::decode(ByteView bytes) {
  ByteReader r(bytes);
  Envelope e;
  ByteView k = r.get_lp();
  if (k.size() != 1 || k[0] < 1 || k[0] > 3) {
    throw DecodeError("bad envelope kind");
  }
  e.kind = static_cast<EnvelopeKind>(k[0]);
  e.origin_chain = ChainId::from_view(r.get_lp());
  e.dest_chain = ChainId::from_view(r.get_lp());
  ByteView p = r.get_lp();
  e.payload.assign(p.begin(), p.end());
  ByteReader hops(r.get_lp());
  e.hop_count = hops.get_u32();
  hops.expect_done();
  r.expect_done();
  return e;
}

Bytes encode_transfer_payload(const TransferPayload& p, const crypto::Group& group) {
  ByteWriter w;
  w.put_lp(p.tx.serialize());
  w.put_lp(zkp::encode_tx_proof(p.proof, group));
  if (p.op) {
    w.put_lp(bridge::encode_bridge_op(*p.op));
  }
  return w.take();
}

TransferPayload decode_transfer_payload(ByteView bytes, EnvelopeKind kind,
                                        const crypto::Group& group) {
  ByteReader r(bytes);
  TransferPayload p;
  p.tx = Transaction::deserialize(r.get_lp());
  p.proof = zkp::decode_tx_proof(r.get_lp(), group);
  if (kind == EnvelopeKind::BridgeOp) {
    p.op = bridge::decode_bridge_op(r.get_lp());
  }
  r.expect_done();
  return p;
}

Envelope make_transfer_envelope(const TransferPayload& p, const crypto::Group& group) {
  Envelope e;
  e.kind = p.op ? EnvelopeKind::BridgeOp : EnvelopeKind::XTransfer;
  e.origin_chain = p.tx.origin_chain;
  e.dest_chain = p.tx.dest_chain;
  e.payload = encode_transfer_payload(p, group);
  e.hop_count = 1;
  return e;
}

Bytes encode_receipt(const RelayReceipt& rc) {
  ByteWriter w;
  w.put_lp(rc.tx_hash.view());
  const std::uint8_t code = rc.result.code();
  w.put_lp(ByteView(&code, 1));
  w.put_lp(rc.relay_signature);
  return w.take();
}

RelayReceipt decode_receipt(ByteView bytes) {
  ByteReader r(bytes);
  RelayReceipt rc;
  rc.tx_hash = TxHash::from_view(r.get_lp());
  ByteView code = r.get_lp();
  if (code.size() != 1) {
    throw DecodeError("bad result code");
  }
  rc.result = zkp::ValidityResult::from_code(code[0]);
  ByteView sig = r.get_lp();
  rc.relay_signature.assign(sig.begin(), sig.end());
  r.expect_done();
  return rc;
}

}  // namespace ztc::relay
