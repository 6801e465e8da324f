#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ztc/ledger/chain.hpp"
#include "ztc/netsim/network.hpp"
#include "ztc/relay/hub.hpp"
#include "ztc/scenario/scenario.hpp"
#include "ztc/scenario/transcript.hpp"

namespace ztc::scenario {

struct RunOptions {
  /// Overrides the scenario seed; the effective seed goes into the header.
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_ticks;
};

enum class RunStatus { Ok, MaxTicksExceeded };
std::string_view run_status_name(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::Ok;
  bool quiescent = false;
  std::uint64_t final_tick = 0;
  std::string text;
  nlohmann::json header;
  std::vector<Record> records;
  nlohmann::json trailer;
  /// Every balance a prover committed to; the zero-trust audit looks for them.
  std::set<std::uint64_t> committed_balances;

  Digest text_hash() const { return sha256(text); }
};

/// Owns the chains, the relay and the network for one run.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario, const RunOptions& opts = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  RunResult run();

  std::uint64_t seed() const { return seed_; }
  const ledger::ChainState& chain(std::string_view name) const;
  std::vector<const ledger::ChainState*> chains() const;
  const relay::RelayHub& relay() const { return *relay_; }
  const netsim::Network& network() const { return *net_; }
  /// Address of a scenario account ("chain:account").
  ledger::Address address(const AccountRef& ref) const;
  crypto::Keypair keys(const AccountRef& ref) const;

 private:
  void setup();
  void process_event(std::size_t i);
  void submit(std::size_t i);
  void replay(std::size_t i);
  void deliver(const netsim::Delivery& d);
  void deliver_to_relay(const netsim::Delivery& d);
  void deliver_to_chain(const netsim::Delivery& d, ledger::ChainState& chain);
  void expire();
  void send(const std::string& from, const std::string& to, const relay::Envelope& env,
            const std::optional<ledger::TxHash>& tx_hash);
  void record(const std::string& actor, const std::string& kind, nlohmann::json payload);
  nlohmann::json event_of(const std::optional<ledger::TxHash>& h) const;
  ledger::ChainState* chain_by_id(const ledger::ChainId& id);
  bool has_open_escrows() const;
  std::optional<std::uint64_t> next_expiry() const;
  nlohmann::json header() const;

  Scenario scenario_;
  std::uint64_t seed_;
  std::uint64_t max_ticks_;
  const crypto::Group* group_;
  std::uint64_t now_ = 0;

  std::vector<std::unique_ptr<ledger::ChainState>> chains_;
  std::map<std::string, ledger::ChainState*> by_name_;
  std::map<ledger::ChainId, ledger::ChainState*> by_id_;
  std::map<std::string, netsim::RngStream> prover_rng_;
  std::unique_ptr<relay::RelayHub> relay_;
  std::unique_ptr<netsim::Network> net_;
  std::unique_ptr<TranscriptBuilder> transcript_;

  std::map<std::size_t, std::size_t> tamper_of_;  // target event -> tamper event
  std::map<ledger::TxHash, std::size_t> tx_event_;
  std::map<std::size_t, relay::Envelope> sent_;  // first envelope of each submission
  std::set<std::uint64_t> committed_balances_;
};

/// Convenience wrapper: builds a Simulation and runs it.
RunResult run_scenario(const Scenario& scenario, const RunOptions& opts = {});

}  // namespace ztc::scenario
