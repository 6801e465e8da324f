#include "ztc/ledger/transaction.hpp"

namespace ztc::ledger {

Address address_of(const crypto::Element& pk, const crypto::Group& group) {
  Digest d = sha256(group.encode(pk));
  return Address::from_view(ByteView(d.data(), Address::size));
}

Address address_from_u64(std::uint64_t v) {
  Address a;
  for (std::size_t i = 0; i < 8; ++i) {
    a.bytes[Address::size - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  return a;
}

namespace {

Digest tagged(std::string_view tag, ByteView body) {
  ByteWriter w;
  w.put_raw(as_bytes(tag));
  w.put_u8(0);
  w.put_raw(body);
  return sha256(w.bytes());
}

}  // namespace

ChainId chain_id_from_name(std::string_view name) {
  return ChainId(tagged("ZTC/CHAIN", as_bytes(name)));
}

AssetId asset_id_from_symbol(std::string_view symbol) {
  return AssetId(tagged("ZTC/ASSET", as_bytes(symbol)));
}

AssetId wrapped_asset_id(const AssetId& underlying, const ChainId& remote) {
  ByteWriter w;
  w.put_raw(underlying.view());
  w.put_raw(remote.view());
  return AssetId(tagged("ZTC/WRAP", w.bytes()));
}

Bytes Transaction::canonical_encoding() const {
  ByteWriter w;
  w.put_lp(sender.view());
  w.put_lp(receiver.view());
  w.put_lp_u64(amount);
  w.put_lp(asset.view());
  w.put_lp_u64(fee);
  w.put_lp_u64(nonce);
  w.put_lp(origin_chain.view());
  w.put_lp(dest_chain.view());
  return w.take();
}

TxHash Transaction::hash() const { return TxHash(sha256(canonical_encoding())); }

Bytes Transaction::serialize() const {
  ByteWriter w;
  w.put_raw(canonical_encoding());
  w.put_lp(signature);
  return w.take();
}

Transaction Transaction::deserialize(ByteView bytes) {
  ByteReader r(bytes);
  Transaction tx;
  tx.sender = Address::from_view(r.get_lp());
  tx.receiver = Address::from_view(r.get_lp());
  tx.amount = r.get_lp_u64();
  tx.asset = AssetId::from_view(r.get_lp());
  tx.fee = r.get_lp_u64();
  tx.nonce = r.get_lp_u64();
  tx.origin_chain = ChainId::from_view(r.get_lp());
  tx.dest_chain = ChainId::from_view(r.get_lp());
  ByteView sig = r.get_lp();
  tx.signature.assign(sig.begin(), sig.end());
  r.expect_done();
  return tx;
}

}  // namespace ztc::ledger
