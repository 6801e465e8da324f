#include "ztc/ledger/chain.hpp"

#include <algorithm>

namespace ztc::ledger {

namespace {

std::string dec(std::uint64_t v) { return std::to_string(v); }

std::string bridge_key(const bridge::BridgeBook::Key& k) {
  return k.first.hex() + "/" + k.second.hex();
}

}  // namespace

std::optional<Element> PublicBoard::key(const Address& a) const {
  auto it = keys_.find(a);
  if (it == keys_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void PublicBoard::publish(const Address& a, const AssetId& asset, std::uint64_t nonce,
                          const Commitment& c) {
  commitments_.insert_or_assign({a, asset, nonce}, c);
}

std::optional<Commitment> PublicBoard::commitment(const Address& a, const AssetId& asset,
                                                  std::uint64_t nonce) const {
  auto it = commitments_.find({a, asset, nonce});
  if (it == commitments_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::string_view escrow_kind_name(EscrowKind k) {
  switch (k) {
    case EscrowKind::Transfer:
      return "transfer";
    case EscrowKind::BridgeLock:
      return "bridge_lock";
    case EscrowKind::BridgeBurn:
      return "bridge_burn";
  }
  return "?";
}

std::string_view ledger_error_name(LedgerError::Code c) {
  switch (c) {
    case LedgerError::Code::DuplicateAsset:
      return "DuplicateAsset";
    case LedgerError::Code::UnknownAsset:
      return "UnknownAsset";
    case LedgerError::Code::NotEnoughBalance:
      return "NotEnoughBalance";
    case LedgerError::Code::SelfTransfer:
      return "SelfTransfer";
    case LedgerError::Code::UnknownAccount:
      return "UnknownAccount";
    case LedgerError::Code::DuplicateAccount:
      return "DuplicateAccount";
    case LedgerError::Code::UnknownEscrow:
      return "UnknownEscrow";
    case LedgerError::Code::BadReceipt:
      return "BadReceipt";
  }
  return "?";
}

std::string_view finalize_outcome_name(FinalizeOutcome o) {
  switch (o) {
    case FinalizeOutcome::Finalized:
      return "finalized";
    case FinalizeOutcome::Refunded:
      return "refunded";
    case FinalizeOutcome::Ignored:
      return "ignored";
  }
  return "?";
}

Bytes receipt_message(const TxHash& h, const ValidityResult& r) {
  ByteWriter w;
  w.put_raw(h.view());
  w.put_u8(r.code());
  return w.take();
}

ChainState::ChainState(std::string name, const Group& group, bool external,
                       std::uint64_t escrow_expiry)
    : name_(std::move(name)),
      id_(chain_id_from_name(name_)),
      group_(&group),
      external_(external),
      escrow_expiry_(escrow_expiry) {}

void ChainState::register_asset(const AssetSpec& spec) {
  if (assets_.contains(spec.canonical_id)) {
    throw LedgerError(LedgerError::Code::DuplicateAsset,
                      "asset " + spec.canonical_id.hex() + " already registered");
  }
  assets_.emplace(spec.canonical_id, spec);
}

const AssetSpec* ChainState::find_asset(const AssetId& id) const {
  auto it = assets_.find(id);
  return it == assets_.end() ? nullptr : &it->second;
}

void ChainState::create_account(const Address& a, const std::optional<Element>& pk,
                                std::string label, bool frozen) {
  if (accounts_.contains(a)) {
    throw LedgerError(LedgerError::Code::DuplicateAccount, "account " + a.hex() + " exists");
  }
  AccountState st;
  st.label = std::move(label);
  st.frozen = frozen;
  accounts_.emplace(a, std::move(st));
  if (pk) {
    board_.register_key(a, *pk);
  }
}

const AccountState& ChainState::account(const Address& a) const {
  auto it = accounts_.find(a);
  if (it == accounts_.end()) {
    throw LedgerError(LedgerError::Code::UnknownAccount, "no account " + a.hex());
  }
  return it->second;
}

AccountState& ChainState::mutable_account(const Address& a) {
  auto it = accounts_.find(a);
  if (it == accounts_.end()) {
    throw LedgerError(LedgerError::Code::UnknownAccount, "no account " + a.hex());
  }
  return it->second;
}

std::uint64_t ChainState::balance(const Address& a, const AssetId& asset) const {
  auto it = accounts_.find(a);
  return it == accounts_.end() ? 0 : it->second.balance(asset);
}

void ChainState::set_frozen(const Address& a, bool frozen) { mutable_account(a).frozen = frozen; }

void ChainState::credit(const Address& a, const AssetId& asset, std::uint64_t amount) {
  auto it = accounts_.find(a);
  if (it == accounts_.end()) {
    it = accounts_.emplace(a, AccountState{}).first;
  }
  it->second.balances[asset] += amount;
}

void ChainState::credit_genesis(const Address& a, const AssetId& asset, std::uint64_t amount) {
  if (!assets_.contains(asset)) {
    throw LedgerError(LedgerError::Code::UnknownAsset, "asset not registered on " + name_);
  }
  mutable_account(a).balances[asset] += amount;
}

void ChainState::set_fee_account(const Address& a) {
  fee_account_ = a;
  if (!accounts_.contains(a)) {
    AccountState st;
    st.label = "relay-operator";
    accounts_.emplace(a, std::move(st));
  }
}

Initiated ChainState::initiate_transfer(const Keypair& sender, const Address& receiver,
                                        std::uint64_t amount, const AssetId& asset,
                                        std::uint64_t fee, const ChainId& dest_chain,
                                        std::uint64_t tick, netsim::RngStream& rng,
                                        const std::optional<bridge::BridgeOp>& op) {
  const Group& g = *group_;
  const Address from = address_of(sender.pk, g);
  AccountState& acct = mutable_account(from);
  if (dest_chain == id_) {
    throw LedgerError(LedgerError::Code::SelfTransfer, "destination is the origin chain");
  }
  if (!assets_.contains(asset)) {
    throw LedgerError(LedgerError::Code::UnknownAsset, "asset not registered on " + name_);
  }
  const std::uint64_t bal = acct.balance(asset);
  if (amount > bal || fee > bal - amount) {
    throw LedgerError(LedgerError::Code::NotEnoughBalance, "balance below amount + fee");
  }

  Transaction tx;
  tx.sender = from;
  tx.receiver = receiver;
  tx.amount = amount;
  tx.asset = asset;
  tx.fee = fee;
  tx.nonce = acct.nonce;
  tx.origin_chain = id_;
  tx.dest_chain = dest_chain;

  const Scalar blinding = g.random_scalar(rng);
  board_.publish(from, asset, tx.nonce, crypto::pedersen_commit(g.scalar(bal), blinding, g));
  TxValidityProof proof = zkp::generate_tx_proof(tx, sender.sk, bal, blinding, g, rng);
  tx.signature = crypto::encode_signature(crypto::schnorr_sign(sender.sk, tx.hash().view(), g, rng), g);

  EscrowEntry e;
  e.tx_hash = tx.hash();
  e.account = from;
  e.asset = asset;
  e.amount = amount;
  e.fee = fee;
  e.created_tick = tick;
  e.expiry_tick = tick + escrow_expiry_;
  e.op = op;
  if (op) {
    e.kind = op->kind == bridge::BridgeOp::Kind::Lock ? EscrowKind::BridgeLock
                                                      : EscrowKind::BridgeBurn;
  }
  acct.balances[asset] = bal - amount - fee;
  acct.nonce += 1;
  escrows_.emplace(e.tx_hash, std::move(e));
  return Initiated{std::move(tx), std::move(proof)};
}

const EscrowEntry* ChainState::find_escrow(const TxHash& h) const {
  auto it = escrows_.find(h);
  return it == escrows_.end() ? nullptr : &it->second;
}

void ChainState::rekey_escrow(const TxHash& old_hash, const TxHash& new_hash) {
  auto node = escrows_.extract(old_hash);
  if (node.empty()) {
    throw LedgerError(LedgerError::Code::UnknownEscrow, "no escrow " + old_hash.hex());
  }
  node.key() = new_hash;
  node.mapped().tx_hash = new_hash;
  escrows_.insert(std::move(node));
}

FinalizeOutcome ChainState::finalize_receipt(const TxHash& tx_hash, const ValidityResult& result,
                                             const crypto::Signature& relay_signature,
                                             const Element& relay_pk) {
  if (!crypto::schnorr_verify(relay_pk, receipt_message(tx_hash, result), relay_signature,
                              *group_)) {
    throw LedgerError(LedgerError::Code::BadReceipt, "relay signature does not verify");
  }
  if (result.reason() == InvalidReason::ReplayedNonce) {
    return FinalizeOutcome::Ignored;
  }
  auto it = escrows_.find(tx_hash);
  if (it == escrows_.end()) {
    throw LedgerError(LedgerError::Code::UnknownEscrow, "no escrow " + tx_hash.hex());
  }
  EscrowEntry e = std::move(it->second);
  escrows_.erase(it);

  if (!result.is_valid()) {
    credit(e.account, e.asset, e.amount + e.fee);
    return FinalizeOutcome::Refunded;
  }
  if (e.fee > 0) {
    credit(fee_account_.value_or(e.account), e.asset, e.fee);
  }
  if (e.op) {
    const bridge::BridgeBook::Key key{e.op->underlying, e.op->remote};
    if (e.kind == EscrowKind::BridgeLock) {
      bridge_.locked[key] += e.amount;
    } else {
      bridge_.wrapped_supply[key] -= e.amount;
    }
  }
  return FinalizeOutcome::Finalized;
}

std::vector<EscrowEntry> ChainState::expire_escrows(std::uint64_t tick) {
  std::vector<EscrowEntry> out;
  for (auto it = escrows_.begin(); it != escrows_.end();) {
    if (it->second.expiry_tick <= tick) {
      credit(it->second.account, it->second.asset, it->second.amount + it->second.fee);
      out.push_back(std::move(it->second));
      it = escrows_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

ValidityResult ChainState::execute_inbound(const Transaction& tx, const TxValidityProof& proof,
                                           const PublicBoard& origin_board,
                                           const std::optional<bridge::BridgeOp>& op) {
  const TxHash h = tx.hash();
  if (auto it = inbound_.find(h); it != inbound_.end()) {
    return it->second;
  }
  const auto published = origin_board.commitment(tx.sender, tx.asset, tx.nonce);
  ValidityResult r = ValidityResult::invalid(InvalidReason::MalformedProof);
  if (published) {
    r = zkp::verify_tx_proof(tx, *published, proof, origin_board.key(tx.sender), *group_);
  }
  if (r.is_valid()) {
    r = apply_inbound(tx, op);
  }
  inbound_.emplace(h, r);
  return r;
}

ValidityResult ChainState::apply_inbound(const Transaction& tx,
                                         const std::optional<bridge::BridgeOp>& op) {
  const ValidityResult failed = ValidityResult::invalid(InvalidReason::ExecutionFailed);
  if (tx.dest_chain != id_) {
    return failed;
  }
  if (auto it = accounts_.find(tx.receiver); it != accounts_.end() && it->second.frozen) {
    return failed;
  }

  if (!op) {
    if (!assets_.contains(tx.asset)) {
      return failed;
    }
    credit(tx.receiver, tx.asset, tx.amount);
    return ValidityResult::valid();
  }
  if (!bridge::consistent(*op, tx)) {
    return failed;
  }

  if (op->kind == bridge::BridgeOp::Kind::Lock) {
    // Remote side: the chain must list the underlying asset to accept wraps.
    const AssetSpec* under = find_asset(op->underlying);
    if (under == nullptr || under->wraps || op->remote != id_ || op->home == id_) {
      return failed;
    }
    const AssetId wid = wrapped_asset_id(op->underlying, id_);
    if (!assets_.contains(wid)) {
      AssetSpec w;
      w.canonical_id = wid;
      w.name = "Wrapped " + under->name;
      w.symbol = "w" + under->symbol;
      w.decimals = under->decimals;
      w.total_supply = 0;
      w.home_chain = op->home;
      w.wraps = op->underlying;
      assets_.emplace(wid, std::move(w));
    }
    credit(tx.receiver, wid, tx.amount);
    bridge_.wrapped_supply[{op->underlying, id_}] += tx.amount;
    return ValidityResult::valid();
  }

  // Burn arriving at the home chain: release locked units.
  const AssetSpec* under = find_asset(op->underlying);
  if (under == nullptr || under->home_chain != id_ || op->home != id_) {
    return failed;
  }
  auto lit = bridge_.locked.find({op->underlying, op->remote});
  if (lit == bridge_.locked.end() || lit->second < tx.amount) {
    return failed;
  }
  lit->second -= tx.amount;
  credit(tx.receiver, op->underlying, tx.amount);
  return ValidityResult::valid();
}

nlohmann::json ChainState::snapshot() const {
  using nlohmann::json;
  json accounts = json::object();
  for (const auto& [addr, st] : accounts_) {
    json balances = json::object();
    for (const auto& [asset, v] : st.balances) {
      balances[asset.hex()] = dec(v);
    }
    accounts[addr.hex()] = {{"balances", balances},
                            {"frozen", st.frozen},
                            {"label", st.label},
                            {"nonce", dec(st.nonce)}};
  }

  json escrows = json::object();
  for (const auto& [h, e] : escrows_) {
    json j = {{"account", e.account.hex()},
              {"amount", dec(e.amount)},
              {"asset", e.asset.hex()},
              {"created_tick", dec(e.created_tick)},
              {"expiry_tick", dec(e.expiry_tick)},
              {"fee", dec(e.fee)},
              {"kind", std::string(escrow_kind_name(e.kind))}};
    if (e.op) {
      j["underlying"] = e.op->underlying.hex();
      j["remote"] = e.op->remote.hex();
    }
    escrows[h.hex()] = std::move(j);
  }

  json assets = json::object();
  for (const auto& [id, a] : assets_) {
    json j = {{"decimals", dec(a.decimals)},
              {"home_chain", a.home_chain.hex()},
              {"name", a.name},
              {"symbol", a.symbol},
              {"total_supply", dec(a.total_supply)}};
    if (a.wraps) {
      j["wraps"] = a.wraps->hex();
    }
    assets[id.hex()] = std::move(j);
  }

  json commitments = json::object();
  for (const auto& [k, c] : board_.commitments()) {
    const auto& [addr, asset, nonce] = k;
    commitments[addr.hex()][asset.hex()][dec(nonce)] = "0x" + to_hex(group_->encode(c.element));
  }

  json locked = json::object();
  for (const auto& [k, v] : bridge_.locked) {
    locked[bridge_key(k)] = dec(v);
  }
  json wrapped = json::object();
  for (const auto& [k, v] : bridge_.wrapped_supply) {
    wrapped[bridge_key(k)] = dec(v);
  }

  return {{"accounts", accounts},
          {"assets", assets},
          {"bridge", {{"locked", locked}, {"wrapped_supply", wrapped}}},
          {"chain_id", id_.hex()},
          {"commitments", commitments},
          {"escrows", escrows},
          {"external", external_},
          {"name", name_}};
}

}  // namespace ztc::ledger
