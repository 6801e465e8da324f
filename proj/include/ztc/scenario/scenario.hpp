#pragma once

// Scenario files: JSON, integers as decimal strings (bare numbers accepted),
// format_version "1".

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ztc/crypto/group.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/netsim/network.hpp"

namespace ztc::scenario {

inline constexpr std::string_view kFormatVersion = "1";
inline constexpr std::uint64_t kDefaultMaxTicks = 10'000;
inline constexpr std::string_view kRelayNode = "relay";

class ScenarioError : public std::runtime_error {
 public:
  enum class Code { SyntaxError, UnknownReference, NonMonotonicTick, InvalidValue };

  ScenarioError(Code code, std::string locus, const std::string& what,
                std::optional<std::size_t> line = std::nullopt);
  Code code() const { return code_; }
  const std::string& locus() const { return locus_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  Code code_;
  std::string locus_;
  std::optional<std::size_t> line_;
};

std::string_view scenario_error_name(ScenarioError::Code c);

struct AssetDecl {
  std::string symbol;
  std::string name;
  std::uint32_t decimals = 0;
  std::uint64_t total_supply = 0;
  std::string home;
};

struct AccountDecl {
  std::string name;
  std::map<std::string, std::uint64_t> balances;  // by asset symbol
  /// Fixed address for receive-only accounts (no key, cannot send).
  std::optional<ledger::Address> address;
  bool frozen = false;
};

struct ChainDecl {
  std::string name;
  bool external = false;
  bool allow_all = true;
  std::vector<std::string> allowlist;  // account names on this chain
  std::vector<std::string> assets;     // symbols listed here
  std::vector<AccountDecl> accounts;
};

struct LinkDecl {
  std::string from;
  std::string to;
  netsim::LinkConfig cfg;
};

struct AccountRef {
  std::string chain;
  std::string account;

  std::string str() const { return chain + ":" + account; }
  bool operator==(const AccountRef&) const = default;
};

enum class Action { Transfer, BridgeLock, BridgeBurn, Partition, Heal, Tamper };
std::string_view action_name(Action a);

enum class Mutation { AmountPlusOne, FeePlusOne, ZeroSignature, ReplayNonce, SwapSender, RebindHash };
std::string_view mutation_name(Mutation m);
std::optional<Mutation> parse_mutation(std::string_view s);
inline constexpr Mutation kAllMutations[] = {Mutation::AmountPlusOne, Mutation::FeePlusOne,
                                             Mutation::ZeroSignature, Mutation::ReplayNonce,
                                             Mutation::SwapSender,    Mutation::RebindHash};

struct Event {
  std::uint64_t tick = 0;
  Action action = Action::Transfer;
  // transfer / bridge_lock / bridge_burn
  AccountRef from;
  AccountRef to;
  std::string asset;
  std::uint64_t amount = 0;
  std::uint64_t fee = 0;
  // partition / heal
  std::string a;
  std::string b;
  std::optional<std::uint64_t> until;
  // tamper
  std::size_t target = 0;
  Mutation mutation = Mutation::AmountPlusOne;

  bool is_submission() const {
    return action == Action::Transfer || action == Action::BridgeLock ||
           action == Action::BridgeBurn;
  }
};

struct Scenario {
  std::uint64_t seed = 0;
  crypto::Profile profile = crypto::Profile::Production;
  std::uint64_t max_ticks = kDefaultMaxTicks;
  std::uint64_t escrow_expiry_ticks = 1000;
  std::vector<AssetDecl> assets;
  std::vector<ChainDecl> chains;
  std::vector<LinkDecl> links;
  std::vector<Event> events;

  const ChainDecl* find_chain(std::string_view name) const;
  const AssetDecl* find_asset(std::string_view symbol) const;
};

/// Parses and validates. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);
/// Checks references, ticks and amounts; parse_scenario calls it. Also fills
/// in missing chain<->relay links with a one-tick lossless default.
void validate(Scenario& s);

/// Canonical JSON form (sorted keys, decimal-string integers).
nlohmann::json to_json(const Scenario& s);
/// SHA-256 of the canonical compact serialization.
Digest scenario_hash(const Scenario& s);

/// Longest possible origin -> relay -> dest -> relay -> origin trip.
std::uint64_t worst_round_trip(const Scenario& s);

/// Reads an unsigned integer given as a decimal string or a JSON number.
std::uint64_t read_u64(const nlohmann::json& j, const std::string& locus);

}  // namespace ztc::scenario
