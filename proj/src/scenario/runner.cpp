#include "ztc/scenario/runner.hpp"

#include <algorithm>

#include "ztc/bridge/bridge.hpp"
#include "ztc/scenario/audit.hpp"

#ifndef ZTC_VERSION
#define ZTC_VERSION "0.0.0"
#endif

namespace ztc::scenario {

using nlohmann::json;
using relay::Envelope;
using relay::EnvelopeKind;

namespace {

const std::string kRelay(kRelayNode);

std::string hex0x(ByteView b) { return "0x" + to_hex(b); }

}  // namespace

std::string_view run_status_name(RunStatus s) {
  return s == RunStatus::Ok ? "Ok" : "MaxTicksExceeded";
}

Simulation::Simulation(const Scenario& scenario, const RunOptions& opts)
    : scenario_(scenario),
      seed_(opts.seed.value_or(scenario.seed)),
      max_ticks_(opts.max_ticks.value_or(scenario.max_ticks)),
      group_(&crypto::Group::get(scenario.profile)) {
  setup();
}

Simulation::~Simulation() = default;

void Simulation::setup() {
  const crypto::Group& g = *group_;
  relay_ = std::make_unique<relay::RelayHub>(g, crypto::Keypair::derive(seed_, kRelay, g), seed_);
  net_ = std::make_unique<netsim::Network>(seed_);
  const ledger::Address operator_addr = ledger::address_of(relay_->public_key(), g);

  for (const auto& cd : scenario_.chains) {
    auto chain = std::make_unique<ledger::ChainState>(cd.name, g, cd.external,
                                                      scenario_.escrow_expiry_ticks);
    for (const auto& sym : cd.assets) {
      const AssetDecl& a = *scenario_.find_asset(sym);
      ledger::AssetSpec spec;
      spec.canonical_id = ledger::asset_id_from_symbol(a.symbol);
      spec.name = a.name;
      spec.symbol = a.symbol;
      spec.decimals = a.decimals;
      spec.total_supply = a.total_supply;
      spec.home_chain = ledger::chain_id_from_name(a.home);
      chain->register_asset(spec);
    }
    chain->set_fee_account(operator_addr);
    relay::ReceiverPolicy policy;
    policy.allow_all = cd.allow_all;
    for (const auto& ad : cd.accounts) {
      const AccountRef ref{cd.name, ad.name};
      if (ad.address) {
        chain->create_account(*ad.address, std::nullopt, ad.name, ad.frozen);
      } else {
        const crypto::Keypair k = keys(ref);
        chain->create_account(ledger::address_of(k.pk, g), k.pk, ad.name, ad.frozen);
      }
      const ledger::Address addr = address(ref);
      for (const auto& [sym, v] : ad.balances) {
        chain->credit_genesis(addr, ledger::asset_id_from_symbol(sym), v);
      }
    }
    for (const auto& n : cd.allowlist) {
      policy.allowlist.insert(address(AccountRef{cd.name, n}));
    }
    relay_->register_chain(chain->id(), cd.name, std::move(policy), &chain->board());
    prover_rng_.emplace(cd.name, netsim::RngStream::fork(seed_, "chain/" + cd.name + "/prover"));
    by_name_[cd.name] = chain.get();
    by_id_[chain->id()] = chain.get();
    chains_.push_back(std::move(chain));
  }

  for (const auto& l : scenario_.links) {
    net_->add_link(l.from, l.to, l.cfg);
  }
  for (std::size_t i = 0; i < scenario_.events.size(); ++i) {
    if (scenario_.events[i].action == Action::Tamper) {
      tamper_of_[scenario_.events[i].target] = i;
    }
  }
  transcript_ = std::make_unique<TranscriptBuilder>(header());
}

json Simulation::header() const {
  json chains = json::object();
  for (const auto& c : chains_) {
    chains[c->name()] = c->id().hex();
  }
  json assets = json::object();
  for (const auto& a : scenario_.assets) {
    assets[a.symbol] = {{"home", a.home},
                        {"id", ledger::asset_id_from_symbol(a.symbol).hex()},
                        {"total_supply", std::to_string(a.total_supply)}};
  }
  return {{"artifact_version", ZTC_VERSION},
          {"assets", assets},
          {"chains", chains},
          {"escrow_expiry_ticks", std::to_string(scenario_.escrow_expiry_ticks)},
          {"max_ticks", std::to_string(max_ticks_)},
          {"profile", std::string(crypto::profile_name(scenario_.profile))},
          {"relay_pk", hex0x(group_->encode(relay_->public_key()))},
          {"scenario_hash", to_hex(scenario_hash(scenario_))},
          {"seed", std::to_string(seed_)}};
}

const ledger::ChainState& Simulation::chain(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) {
    throw std::out_of_range("no chain " + std::string(name));
  }
  return *it->second;
}

std::vector<const ledger::ChainState*> Simulation::chains() const {
  std::vector<const ledger::ChainState*> out;
  for (const auto& c : chains_) out.push_back(c.get());
  return out;
}

crypto::Keypair Simulation::keys(const AccountRef& ref) const {
  return crypto::Keypair::derive(seed_, ref.chain + "/" + ref.account, *group_);
}

ledger::Address Simulation::address(const AccountRef& ref) const {
  const ChainDecl* c = scenario_.find_chain(ref.chain);
  if (c != nullptr) {
    for (const auto& a : c->accounts) {
      if (a.name == ref.account && a.address) return *a.address;
    }
  }
  return ledger::address_of(keys(ref).pk, *group_);
}

ledger::ChainState* Simulation::chain_by_id(const ledger::ChainId& id) {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

void Simulation::record(const std::string& actor, const std::string& kind, json payload) {
  transcript_->append(now_, actor, kind, std::move(payload));
}

json Simulation::event_of(const std::optional<ledger::TxHash>& h) const {
  if (!h) return nullptr;
  auto it = tx_event_.find(*h);
  return it == tx_event_.end() ? json(nullptr) : json(std::to_string(it->second));
}

void Simulation::send(const std::string& from, const std::string& to, const Envelope& env,
                      const std::optional<ledger::TxHash>& tx_hash) {
  const bool reliable = env.kind == EnvelopeKind::Receipt;
  const Bytes bytes = env.encode();
  const std::string env_hash = to_hex(sha256(bytes));
  const netsim::SendOutcome out = net_->send(from, to, bytes, reliable);
  json p = {{"envelope", env_hash},
            {"event", event_of(tx_hash)},
            {"from", from},
            {"kind", std::string(relay::envelope_kind_name(env.kind))},
            {"to", to},
            {"tx_hash", tx_hash ? json(tx_hash->hex()) : json(nullptr)}};
  if (out.dropped()) {
    p["cause"] = out.drop == netsim::DropCause::Partition ? "partition" : "random";
    record("net", "Drop", std::move(p));
  } else {
    p["deliver_tick"] = std::to_string(out.deliver_tick);
    p["seq"] = std::to_string(out.seq);
    record(from, "Send", std::move(p));
  }
}

void Simulation::process_event(std::size_t i) {
  const Event& e = scenario_.events[i];
  switch (e.action) {
    case Action::Transfer:
    case Action::BridgeLock:
    case Action::BridgeBurn:
      submit(i);
      break;
    case Action::Partition:
      net_->partition(e.a, e.b, now_, e.until.value_or(UINT64_MAX));
      record("net", "Partition",
             {{"a", e.a}, {"b", e.b}, {"event", std::to_string(i)},
              {"until", e.until ? json(std::to_string(*e.until)) : json(nullptr)}});
      break;
    case Action::Heal:
      net_->heal(e.a, e.b, now_);
      record("net", "Heal", {{"a", e.a}, {"b", e.b}, {"event", std::to_string(i)}});
      break;
    case Action::Tamper:
      if (e.mutation == Mutation::ReplayNonce) replay(i);
      break;
  }
}

void Simulation::submit(std::size_t i) {
  const Event& e = scenario_.events[i];
  const crypto::Group& g = *group_;
  ledger::ChainState& origin = *by_name_.at(e.from.chain);
  const ledger::ChainId dest = ledger::chain_id_from_name(e.to.chain);
  const crypto::Keypair sender = keys(e.from);
  const ledger::Address receiver = address(e.to);
  const ledger::AssetId asset = ledger::asset_id_from_symbol(e.asset);
  netsim::RngStream& rng = prover_rng_.at(e.from.chain);

  const std::uint64_t committed = e.action == Action::BridgeBurn
                                      ? origin.balance(ledger::address_of(sender.pk, g),
                                                       ledger::wrapped_asset_id(asset, origin.id()))
                                      : origin.balance(ledger::address_of(sender.pk, g), asset);
  relay::TransferPayload payload;
  try {
    if (e.action == Action::Transfer) {
      ledger::Initiated init =
          origin.initiate_transfer(sender, receiver, e.amount, asset, e.fee, dest, now_, rng);
      payload = relay::TransferPayload{std::move(init.tx), std::move(init.proof), std::nullopt};
    } else if (e.action == Action::BridgeLock) {
      payload = bridge::lock_and_mint(origin, sender, asset, e.amount, e.fee, receiver, dest, now_, rng)
                    .payload;
    } else {
      payload = bridge::burn_and_unlock(origin, sender, asset, e.amount, e.fee, receiver, dest, now_, rng)
                    .payload;
    }
  } catch (const ledger::LedgerError& err) {
    record(origin.name(), "Refused",
           {{"event", std::to_string(i)}, {"reason", std::string(ledger::ledger_error_name(err.code()))}});
    return;
  }
  committed_balances_.insert(committed);

  const ledger::TxHash h = payload.tx.hash();
  tx_event_[h] = i;
  const auto commitment = origin.board().commitment(payload.tx.sender, payload.tx.asset, payload.tx.nonce);
  record(origin.name(), "Initiate",
         {{"amount", std::to_string(payload.tx.amount)},
          {"asset", payload.tx.asset.hex()},
          {"commitment", hex0x(g.encode(commitment->element))},
          {"dest", e.to.chain},
          {"event", std::to_string(i)},
          {"fee", std::to_string(payload.tx.fee)},
          {"kind", std::string(action_name(e.action))},
          {"nonce", std::to_string(payload.tx.nonce)},
          {"receiver", payload.tx.receiver.hex()},
          {"sender", payload.tx.sender.hex()},
          {"tx_hash", h.hex()}});

  // A dishonest origin rewrites its own transaction after proving.
  if (auto t = tamper_of_.find(i); t != tamper_of_.end()) {
    const Mutation m = scenario_.events[t->second].mutation;
    ledger::Transaction& tx = payload.tx;
    switch (m) {
      case Mutation::AmountPlusOne:
        tx.amount += 1;
        break;
      case Mutation::FeePlusOne:
        tx.fee += 1;
        break;
      case Mutation::ZeroSignature:
        tx.signature.assign(tx.signature.size(), 0);
        payload.proof.auth_signature = crypto::Signature{crypto::Element(0), crypto::Scalar(0)};
        break;
      case Mutation::SwapSender:
        std::swap(tx.sender, tx.receiver);
        break;
      case Mutation::RebindHash: {
        tx.amount += 1;
        payload.proof.binding_hash = tx.hash().bytes;
        payload.proof.auth_signature = crypto::schnorr_sign(sender.sk, tx.hash().view(), g, rng);
        tx.signature = crypto::encode_signature(crypto::schnorr_sign(sender.sk, tx.hash().view(), g, rng), g);
        break;
      }
      case Mutation::ReplayNonce:
        break;
    }
    if (m != Mutation::ReplayNonce) {
      const ledger::TxHash nh = tx.hash();
      if (nh != h) {
        origin.rekey_escrow(h, nh);
        tx_event_[nh] = i;
      }
      record(origin.name(), "Tamper",
             {{"event", std::to_string(t->second)},
              {"mutation", std::string(mutation_name(m))},
              {"original_tx_hash", h.hex()},
              {"target", std::to_string(i)},
              {"tx_hash", nh.hex()}});
    }
  }

  Envelope env = relay::make_transfer_envelope(payload, g);
  sent_[i] = env;
  send(origin.name(), kRelay, env, payload.tx.hash());
}

void Simulation::replay(std::size_t i) {
  const Event& e = scenario_.events[i];
  const Event& target = scenario_.events[e.target];
  auto it = sent_.find(e.target);
  json p = {{"event", std::to_string(i)},
            {"mutation", std::string(mutation_name(e.mutation))},
            {"target", std::to_string(e.target)}};
  if (it == sent_.end()) {
    p["tx_hash"] = nullptr;
    record(target.from.chain, "Tamper", std::move(p));
    return;
  }
  const relay::TransferPayload payload =
      relay::decode_transfer_payload(it->second.payload, it->second.kind, *group_);
  const ledger::TxHash h = payload.tx.hash();
  p["tx_hash"] = h.hex();
  record(target.from.chain, "Tamper", std::move(p));
  send(target.from.chain, kRelay, it->second, h);
}

void Simulation::deliver(const netsim::Delivery& d) {
  if (d.to == kRelay) {
    deliver_to_relay(d);
  } else {
    deliver_to_chain(d, *by_name_.at(d.to));
  }
}

void Simulation::deliver_to_relay(const netsim::Delivery& d) {
  const crypto::Group& g = *group_;
  const Envelope env = Envelope::decode(d.payload);
  std::optional<ledger::ChainId> from;
  if (auto it = by_name_.find(d.from); it != by_name_.end()) from = it->second->id();

  relay::IngressOutcome o = relay_->ingress(env, from);
  if (env.kind == EnvelopeKind::Receipt) {
    json p = {{"event", event_of(o.tx_hash)},
              {"from", d.from},
              {"result", o.result.to_string()},
              {"tx_hash", o.tx_hash ? json(o.tx_hash->hex()) : json(nullptr)}};
    record(kRelay, o.kind == relay::IngressKind::ReceiptForwarded ? "ReceiptForward" : "ReceiptUnknown",
           std::move(p));
  } else {
    json p = {{"envelope", std::string(relay::envelope_kind_name(env.kind))},
              {"event", event_of(o.tx_hash)},
              {"from", d.from},
              {"result", o.result.to_string()},
              {"tx_hash", o.tx_hash ? json(o.tx_hash->hex()) : json(nullptr)}};
    if (o.transfer) {
      p["tx"] = hex0x(o.transfer->tx.serialize());
      p["proof"] = hex0x(zkp::encode_tx_proof(o.transfer->proof, g));
      if (o.transfer->op) p["bridge_op"] = hex0x(bridge::encode_bridge_op(*o.transfer->op));
    }
    p["proof_check"] = o.proof_check ? json(o.proof_check->to_string()) : json(nullptr);
    p["commitment"] = o.commitment ? json(hex0x(g.encode(o.commitment->element))) : json(nullptr);
    p["sender_pk"] = o.sender_pk ? json(hex0x(g.encode(*o.sender_pk))) : json(nullptr);
    record(kRelay, "Ingress", std::move(p));
  }
  for (const auto& out : o.out) {
    send(kRelay, relay_->net_address(out.to), out.env, o.tx_hash);
  }
}

void Simulation::deliver_to_chain(const netsim::Delivery& d, ledger::ChainState& chain) {
  const Envelope env = Envelope::decode(d.payload);
  if (env.kind == EnvelopeKind::Receipt) {
    const relay::RelayReceipt rc = relay::decode_receipt(env.payload);
    std::string outcome;
    try {
      const crypto::Signature sig = crypto::decode_signature(rc.relay_signature, *group_);
      outcome = std::string(ledger::finalize_outcome_name(
          chain.finalize_receipt(rc.tx_hash, rc.result, sig, relay_->public_key())));
    } catch (const DecodeError&) {
      outcome = "bad_signature";
    } catch (const ledger::LedgerError& err) {
      outcome = err.code() == ledger::LedgerError::Code::UnknownEscrow ? "unknown_escrow"
                                                                        : "bad_signature";
    }
    record(chain.name(), "Finalize",
           {{"event", event_of(rc.tx_hash)},
            {"outcome", outcome},
            {"result", rc.result.to_string()},
            {"tx_hash", rc.tx_hash.hex()}});
    return;
  }

  const relay::TransferPayload p = relay::decode_transfer_payload(env.payload, env.kind, *group_);
  const ledger::TxHash h = p.tx.hash();
  const bool fresh = !chain.already_executed(h);
  const ledger::ChainState* origin = chain_by_id(p.tx.origin_chain);
  zkp::ValidityResult r = zkp::ValidityResult::invalid(zkp::InvalidReason::UnknownChain);
  if (origin != nullptr) {
    r = chain.execute_inbound(p.tx, p.proof, origin->board(), p.op);
  }
  record(chain.name(), "Execute",
         {{"event", event_of(h)},
          {"result", r.to_string()},
          {"reverified", fresh && origin != nullptr},
          {"tx_hash", h.hex()}});

  Envelope back;
  back.kind = EnvelopeKind::Receipt;
  back.origin_chain = chain.id();
  back.dest_chain = p.tx.origin_chain;
  back.payload = relay::encode_receipt(relay::RelayReceipt{h, r, {}});
  back.hop_count = 1;
  send(chain.name(), kRelay, back, h);
}

void Simulation::expire() {
  for (const auto& c : chains_) {
    for (const auto& e : c->expire_escrows(now_)) {
      record(c->name(), "TimeoutRefund",
             {{"amount", std::to_string(e.amount)},
              {"event", event_of(e.tx_hash)},
              {"fee", std::to_string(e.fee)},
              {"tx_hash", e.tx_hash.hex()}});
    }
  }
}

bool Simulation::has_open_escrows() const {
  return std::any_of(chains_.begin(), chains_.end(),
                     [](const auto& c) { return !c->escrows().empty(); });
}

std::optional<std::uint64_t> Simulation::next_expiry() const {
  std::optional<std::uint64_t> best;
  for (const auto& c : chains_) {
    for (const auto& [h, e] : c->escrows()) {
      if (!best || e.expiry_tick < *best) best = e.expiry_tick;
    }
  }
  return best;
}

RunResult Simulation::run() {
  RunResult res;
  std::size_t next_event = 0;
  const auto& events = scenario_.events;

  for (;;) {
    const bool events_done = next_event == events.size();
    if (events_done && net_->in_flight() == 0 && !has_open_escrows()) {
      res.quiescent = true;
      break;
    }
    std::optional<std::uint64_t> t;
    auto consider = [&t](std::optional<std::uint64_t> c) {
      if (c && (!t || *c < *t)) t = c;
    };
    if (!events_done) consider(events[next_event].tick);
    consider(net_->next_due_tick());
    consider(next_expiry());
    if (*t > max_ticks_) {
      res.status = RunStatus::MaxTicksExceeded;
      break;
    }
    now_ = std::max(now_, *t);
    net_->advance_to(now_);

    while (next_event < events.size() && events[next_event].tick <= now_) {
      process_event(next_event++);
    }
    for (auto due = net_->pop_due(); !due.empty(); due = net_->pop_due()) {
      for (const auto& d : due) deliver(d);
    }
    expire();
  }

  json snapshots = json::object();
  for (const auto& c : chains_) snapshots[c->name()] = c->snapshot();
  const Metrics m = compute_metrics(transcript_->records());

  json trailer = {{"final_tick", std::to_string(now_)},
                  {"metrics", m.to_json()},
                  {"quiescent", res.quiescent},
                  {"snapshots", snapshots},
                  {"status", std::string(run_status_name(res.status))}};
  record("sim", "Final",
         {{"quiescent", res.quiescent},
          {"status", std::string(run_status_name(res.status))},
          {"trailer_digest", to_hex(trailer_digest(trailer))}});

  res.final_tick = now_;
  res.text = transcript_->render(trailer);
  res.header = transcript_->header();
  res.records = transcript_->records();
  trailer["chained_hash"] = to_hex(transcript_->head());
  res.trailer = std::move(trailer);
  res.committed_balances = committed_balances_;
  return res;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& opts) {
  Simulation sim(scenario, opts);
  return sim.run();
}

}  // namespace ztc::scenario
