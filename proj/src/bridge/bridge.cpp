#include "ztc/bridge/bridge.hpp"

#include <set>

namespace ztc::bridge {

Bytes encode_bridge_op(const BridgeOp& op) {
  ByteWriter w;
  const std::uint8_t k = static_cast<std::uint8_t>(op.kind);
  w.put_lp(ByteView(&k, 1));
  w.put_lp(op.underlying.view());
  w.put_lp(op.home.view());
  w.put_lp(op.remote.view());
  return w.take();
}

BridgeOp decode_bridge_op(ByteView bytes) {
  ByteReader r(bytes);
  BridgeOp op;
  ByteView k = r.get_lp();
  if (k.size() != 1 || (k[0] != 1 && k[0] != 2)) {
    throw DecodeError("bad bridge op kind");
  }
  op.kind = static_cast<BridgeOp::Kind>(k[0]);
  op.underlying = AssetId::from_view(r.get_lp());
  op.home = ChainId::from_view(r.get_lp());
  op.remote = ChainId::from_view(r.get_lp());
  r.expect_done();
  return op;
}

bool consistent(const BridgeOp& op, const ledger::Transaction& tx) {
  if (op.home == op.remote) {
    return false;
  }
  if (op.kind == BridgeOp::Kind::Lock) {
    return tx.asset == op.underlying && tx.origin_chain == op.home && tx.dest_chain == op.remote;
  }
  return tx.asset == ledger::wrapped_asset_id(op.underlying, op.remote) &&
         tx.origin_chain == op.remote && tx.dest_chain == op.home;
}

namespace {

Submission submit(ledger::ChainState& chain, const crypto::Keypair& from, const AssetId& asset,
                  std::uint64_t amount, std::uint64_t fee, const ledger::Address& to,
                  const ChainId& dest, const BridgeOp& op, std::uint64_t tick,
                  netsim::RngStream& rng) {
  ledger::Initiated init =
      chain.initiate_transfer(from, to, amount, asset, fee, dest, tick, rng, op);
  Submission s;
  s.payload = relay::TransferPayload{std::move(init.tx), std::move(init.proof), op};
  s.env = relay::make_transfer_envelope(s.payload, chain.group());
  return s;
}

}  // namespace

Submission lock_and_mint(ledger::ChainState& home, const crypto::Keypair& from,
                         const AssetId& asset, std::uint64_t amount, std::uint64_t fee,
                         const ledger::Address& to_remote_account, const ChainId& remote_chain,
                         std::uint64_t tick, netsim::RngStream& rng) {
  const ledger::AssetSpec* spec = home.find_asset(asset);
  if (spec == nullptr || spec->wraps || spec->home_chain != home.id()) {
    throw ledger::LedgerError(ledger::LedgerError::Code::UnknownAsset,
                              "only home assets can be locked");
  }
  const BridgeOp op{BridgeOp::Kind::Lock, asset, home.id(), remote_chain};
  return submit(home, from, asset, amount, fee, to_remote_account, remote_chain, op, tick, rng);
}

Submission burn_and_unlock(ledger::ChainState& remote, const crypto::Keypair& from,
                           const AssetId& underlying, std::uint64_t amount, std::uint64_t fee,
                           const ledger::Address& to_home_account, const ChainId& home_chain,
                           std::uint64_t tick, netsim::RngStream& rng) {
  const AssetId wid = ledger::wrapped_asset_id(underlying, remote.id());
  if (remote.find_asset(wid) == nullptr) {
    throw ledger::LedgerError(ledger::LedgerError::Code::UnknownAsset,
                              "no wrapped units of this asset here");
  }
  const BridgeOp op{BridgeOp::Kind::Burn, underlying, home_chain, remote.id()};
  return submit(remote, from, wid, amount, fee, to_home_account, home_chain, op, tick, rng);
}

std::vector<std::string> invariant_violations(
    const std::vector<const ledger::ChainState*>& chains) {
  std::set<BridgeBook::Key> keys;
  for (const auto* c : chains) {
    for (const auto& [k, v] : c->bridge_book().locked) keys.insert(k);
    for (const auto& [k, v] : c->bridge_book().wrapped_supply) keys.insert(k);
  }
  std::vector<std::string> out;
  for (const auto& k : keys) {
    std::uint64_t locked = 0;
    std::uint64_t wrapped = 0;
    for (const auto* c : chains) {
      locked += c->bridge_book().locked_for(k.first, k.second);
      wrapped += c->bridge_book().wrapped_for(k.first, k.second);
    }
    if (locked != wrapped) {
      out.push_back("asset " + k.first.hex() + " on " + k.second.hex() + ": locked " +
                    std::to_string(locked) + " != wrapped " + std::to_string(wrapped));
    }
  }
  return out;
}

}  // namespace ztc::bridge
