#include "ztc/scenario/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace ztc::scenario {

using nlohmann::json;
using Code = ScenarioError::Code;

ScenarioError::ScenarioError(Code code, std::string locus, const std::string& what,
                             std::optional<std::size_t> line)
    : std::runtime_error(std::string(scenario_error_name(code)) +
                         (line ? " (line " + std::to_string(*line) + ")" : std::string()) +
                         (locus.empty() ? std::string() : " at " + locus) + ": " + what),
      code_(code),
      locus_(std::move(locus)),
      line_(line) {}

std::string_view scenario_error_name(ScenarioError::Code c) {
  switch (c) {
    case Code::SyntaxError:
      return "SyntaxError";
    case Code::UnknownReference:
      return "UnknownReference";
    case Code::NonMonotonicTick:
      return "NonMonotonicTick";
    case Code::InvalidValue:
      return "InvalidValue";
  }
  return "?";
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Transfer:
      return "transfer";
    case Action::BridgeLock:
      return "bridge_lock";
    case Action::BridgeBurn:
      return "bridge_burn";
    case Action::Partition:
      return "partition";
    case Action::Heal:
      return "heal";
    case Action::Tamper:
      return "tamper";
  }
  return "?";
}

std::string_view mutation_name(Mutation m) {
  switch (m) {
    case Mutation::AmountPlusOne:
      return "amount+1";
    case Mutation::FeePlusOne:
      return "fee+1";
    case Mutation::ZeroSignature:
      return "zero_signature";
    case Mutation::ReplayNonce:
      return "replay_nonce";
    case Mutation::SwapSender:
      return "swap_sender";
    case Mutation::RebindHash:
      return "rebind_hash";
  }
  return "?";
}

std::optional<Mutation> parse_mutation(std::string_view s) {
  for (Mutation m : kAllMutations) {
    if (mutation_name(m) == s) return m;
  }
  return std::nullopt;
}

const ChainDecl* Scenario::find_chain(std::string_view name) const {
  for (const auto& c : chains) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const AssetDecl* Scenario::find_asset(std::string_view symbol) const {
  for (const auto& a : assets) {
    if (a.symbol == symbol) return &a;
  }
  return nullptr;
}

namespace {

[[noreturn]] void invalid(const std::string& locus, const std::string& what) {
  throw ScenarioError(Code::InvalidValue, locus, what);
}

[[noreturn]] void unknown(const std::string& locus, const std::string& what) {
  throw ScenarioError(Code::UnknownReference, locus, what);
}

void expect_keys(const json& j, const std::string& locus, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    invalid(locus, "expected an object");
  }
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      invalid(locus + "." + k, "unknown field");
    }
  }
}

const json& need(const json& j, const char* key, const std::string& locus) {
  auto it = j.find(key);
  if (it == j.end()) {
    invalid(locus + "." + key, "missing field");
  }
  return *it;
}

std::string read_string(const json& j, const std::string& locus) {
  if (!j.is_string()) {
    invalid(locus, "expected a string");
  }
  return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& locus) {
  if (!j.is_boolean()) {
    invalid(locus, "expected true or false");
  }
  return j.get<bool>();
}

AccountRef read_ref(const json& j, const std::string& locus) {
  const std::string s = read_string(j, locus);
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
    invalid(locus, "expected \"chain:account\"");
  }
  return AccountRef{s.substr(0, colon), s.substr(colon + 1)};
}

netsim::LinkConfig read_link_config(const json& j, const std::string& locus) {
  netsim::LinkConfig cfg;
  if (j.contains("base_latency")) cfg.base_latency = read_u64(j["base_latency"], locus + ".base_latency");
  if (j.contains("jitter")) cfg.jitter = read_u64(j["jitter"], locus + ".jitter");
  if (j.contains("drop")) {
    const json& d = j["drop"];
    if (d.is_string()) {
      const std::string s = d.get<std::string>();
      const auto slash = s.find('/');
      if (slash == std::string::npos) {
        invalid(locus + ".drop", "expected \"num/den\"");
      }
      cfg.drop_num = read_u64(json(s.substr(0, slash)), locus + ".drop");
      cfg.drop_den = read_u64(json(s.substr(slash + 1)), locus + ".drop");
    } else {
      cfg.drop_num = read_u64(d, locus + ".drop");
      cfg.drop_den = 1;
    }
    if (cfg.drop_den == 0 || cfg.drop_num > cfg.drop_den) {
      invalid(locus + ".drop", "probability must be num/den in [0, 1]");
    }
  }
  return cfg;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::uint64_t link_latency(const Scenario& s, const std::string& from, const std::string& to) {
  for (const auto& l : s.links) {
    if (l.from == from && l.to == to) return l.cfg.worst_case_latency();
  }
  for (const auto& l : s.links) {
    if (l.from == to && l.to == from) return l.cfg.worst_case_latency();
  }
  return 1;
}

std::string drop_string(const netsim::LinkConfig& c) {
  return std::to_string(c.drop_num) + "/" + std::to_string(c.drop_den);
}

}  // namespace

std::uint64_t read_u64(const json& j, const std::string& locus) {
  if (j.is_number_unsigned()) {
    return j.get<std::uint64_t>();
  }
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!s.empty() && ec == std::errc() && p == s.data() + s.size() && s[0] != '+' &&
        (s.size() == 1 || s[0] != '0')) {
      return v;
    }
  }
  invalid(locus, "expected an unsigned 64-bit integer");
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(Code::SyntaxError, "", e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }

  expect_keys(root, "scenario",
              {"format_version", "seed", "profile", "max_ticks", "escrow_expiry_ticks", "assets",
               "chains", "links", "events"});
  Scenario s;
  if (read_string(need(root, "format_version", "scenario"), "format_version") != kFormatVersion) {
    invalid("format_version", "unsupported format version");
  }
  s.seed = read_u64(need(root, "seed", "scenario"), "seed");
  if (root.contains("profile")) {
    try {
      s.profile = crypto::parse_profile(read_string(root["profile"], "profile"));
    } catch (const std::invalid_argument&) {
      invalid("profile", "expected \"production\" or \"tiny\"");
    }
  }
  if (root.contains("max_ticks")) s.max_ticks = read_u64(root["max_ticks"], "max_ticks");
  if (root.contains("escrow_expiry_ticks")) {
    s.escrow_expiry_ticks = read_u64(root["escrow_expiry_ticks"], "escrow_expiry_ticks");
  }

  const json& assets = root.value("assets", json::array());
  if (!assets.is_array()) invalid("assets", "expected an array");
  for (std::size_t i = 0; i < assets.size(); ++i) {
    const std::string loc = "assets[" + std::to_string(i) + "]";
    const json& a = assets[i];
    expect_keys(a, loc, {"symbol", "name", "decimals", "total_supply", "home"});
    AssetDecl d;
    d.symbol = read_string(need(a, "symbol", loc), loc + ".symbol");
    d.name = a.contains("name") ? read_string(a["name"], loc + ".name") : d.symbol;
    const std::uint64_t dec = a.contains("decimals") ? read_u64(a["decimals"], loc + ".decimals") : 0;
    if (dec > 255) invalid(loc + ".decimals", "at most 255");
    d.decimals = static_cast<std::uint32_t>(dec);
    d.total_supply = read_u64(need(a, "total_supply", loc), loc + ".total_supply");
    d.home = read_string(need(a, "home", loc), loc + ".home");
    s.assets.push_back(std::move(d));
  }

  const json& chains = need(root, "chains", "scenario");
  if (!chains.is_array()) invalid("chains", "expected an array");
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const std::string loc = "chains[" + std::to_string(i) + "]";
    const json& c = chains[i];
    expect_keys(c, loc, {"name", "external", "receiver_policy", "assets", "accounts"});
    ChainDecl d;
    d.name = read_string(need(c, "name", loc), loc + ".name");
    if (c.contains("external")) d.external = read_bool(c["external"], loc + ".external");
    if (c.contains("receiver_policy")) {
      const json& p = c["receiver_policy"];
      if (p.is_string() && p.get<std::string>() == "allow_all") {
        d.allow_all = true;
      } else if (p.is_object()) {
        expect_keys(p, loc + ".receiver_policy", {"allowlist"});
        const json& list = need(p, "allowlist", loc + ".receiver_policy");
        if (!list.is_array()) invalid(loc + ".receiver_policy.allowlist", "expected an array");
        d.allow_all = false;
        for (const auto& n : list) {
          d.allowlist.push_back(read_string(n, loc + ".receiver_policy.allowlist"));
        }
      } else {
        invalid(loc + ".receiver_policy", "expected \"allow_all\" or {\"allowlist\": [...]}");
      }
    }
    const json& listed = c.value("assets", json::array());
    if (!listed.is_array()) invalid(loc + ".assets", "expected an array");
    for (const auto& a : listed) d.assets.push_back(read_string(a, loc + ".assets"));

    const json& accounts = c.value("accounts", json::array());
    if (!accounts.is_array()) invalid(loc + ".accounts", "expected an array");
    for (std::size_t k = 0; k < accounts.size(); ++k) {
      const std::string aloc = loc + ".accounts[" + std::to_string(k) + "]";
      const json& a = accounts[k];
      expect_keys(a, aloc, {"name", "balances", "address", "frozen"});
      AccountDecl acct;
      acct.name = read_string(need(a, "name", aloc), aloc + ".name");
      if (a.contains("balances")) {
        if (!a["balances"].is_object()) invalid(aloc + ".balances", "expected an object");
        for (const auto& [sym, v] : a["balances"].items()) {
          acct.balances[sym] = read_u64(v, aloc + ".balances." + sym);
        }
      }
      if (a.contains("address")) {
        try {
          acct.address = ledger::Address::from_hex(read_string(a["address"], aloc + ".address"));
        } catch (const std::exception&) {
          invalid(aloc + ".address", "expected 20 bytes of hex");
        }
      }
      if (a.contains("frozen")) acct.frozen = read_bool(a["frozen"], aloc + ".frozen");
      d.accounts.push_back(std::move(acct));
    }
    s.chains.push_back(std::move(d));
  }

  const json& links = root.value("links", json::array());
  if (!links.is_array()) invalid("links", "expected an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string loc = "links[" + std::to_string(i) + "]";
    const json& l = links[i];
    expect_keys(l, loc, {"from", "to", "base_latency", "jitter", "drop"});
    LinkDecl d;
    d.from = read_string(need(l, "from", loc), loc + ".from");
    d.to = read_string(need(l, "to", loc), loc + ".to");
    d.cfg = read_link_config(l, loc);
    s.links.push_back(std::move(d));
  }

  const json& events = root.value("events", json::array());
  if (!events.is_array()) invalid("events", "expected an array");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string loc = "events[" + std::to_string(i) + "]";
    const json& e = events[i];
    if (!e.is_object()) invalid(loc, "expected an object");
    Event ev;
    ev.tick = read_u64(need(e, "tick", loc), loc + ".tick");
    const std::string action = read_string(need(e, "action", loc), loc + ".action");
    if (action == "transfer" || action == "bridge_lock" || action == "bridge_burn") {
      expect_keys(e, loc, {"tick", "action", "from", "to", "asset", "amount", "fee"});
      ev.action = action == "transfer"      ? Action::Transfer
                  : action == "bridge_lock" ? Action::BridgeLock
                                            : Action::BridgeBurn;
      ev.from = read_ref(need(e, "from", loc), loc + ".from");
      ev.to = read_ref(need(e, "to", loc), loc + ".to");
      ev.asset = read_string(need(e, "asset", loc), loc + ".asset");
      ev.amount = read_u64(need(e, "amount", loc), loc + ".amount");
      ev.fee = e.contains("fee") ? read_u64(e["fee"], loc + ".fee") : 0;
    } else if (action == "partition" || action == "heal") {
      expect_keys(e, loc, {"tick", "action", "a", "b", "until"});
      ev.action = action == "partition" ? Action::Partition : Action::Heal;
      ev.a = read_string(need(e, "a", loc), loc + ".a");
      ev.b = read_string(need(e, "b", loc), loc + ".b");
      if (e.contains("until")) {
        if (ev.action == Action::Heal) invalid(loc + ".until", "only partitions take an end tick");
        ev.until = read_u64(e["until"], loc + ".until");
      }
    } else if (action == "tamper") {
      expect_keys(e, loc, {"tick", "action", "target", "mutation"});
      ev.action = Action::Tamper;
      ev.target = static_cast<std::size_t>(read_u64(need(e, "target", loc), loc + ".target"));
      auto m = parse_mutation(read_string(need(e, "mutation", loc), loc + ".mutation"));
      if (!m) invalid(loc + ".mutation", "unknown mutation");
      ev.mutation = *m;
    } else {
      invalid(loc + ".action", "unknown action \"" + action + "\"");
    }
    s.events.push_back(std::move(ev));
  }

  validate(s);
  return s;
}

void validate(Scenario& s) {
  std::set<std::string> chain_names;
  for (const auto& c : s.chains) {
    if (c.name.empty() || c.name == kRelayNode || c.name.find(':') != std::string::npos) {
      invalid("chains", "bad chain name \"" + c.name + "\"");
    }
    if (!chain_names.insert(c.name).second) invalid("chains", "duplicate chain " + c.name);
  }

  std::set<std::string> symbols;
  for (const auto& a : s.assets) {
    if (a.symbol.empty() || !symbols.insert(a.symbol).second) {
      invalid("assets", "duplicate or empty symbol \"" + a.symbol + "\"");
    }
    const ChainDecl* home = s.find_chain(a.home);
    if (home == nullptr) unknown("assets." + a.symbol + ".home", "no chain " + a.home);
    if (std::find(home->assets.begin(), home->assets.end(), a.symbol) == home->assets.end()) {
      invalid("assets." + a.symbol + ".home", "home chain must list the asset");
    }
  }

  std::map<std::string, std::uint64_t> genesis;
  for (const auto& c : s.chains) {
    std::set<std::string> listed;
    for (const auto& sym : c.assets) {
      if (s.find_asset(sym) == nullptr) unknown("chains." + c.name + ".assets", "no asset " + sym);
      if (!listed.insert(sym).second) invalid("chains." + c.name + ".assets", "duplicate " + sym);
    }
    std::set<std::string> names;
    std::set<ledger::Address> fixed;
    for (const auto& a : c.accounts) {
      const std::string loc = "chains." + c.name + ".accounts." + a.name;
      if (a.name.empty() || !names.insert(a.name).second) invalid(loc, "duplicate or empty name");
      if (a.address && !fixed.insert(*a.address).second) invalid(loc, "duplicate address");
      for (const auto& [sym, v] : a.balances) {
        if (!listed.contains(sym)) unknown(loc + ".balances", "asset " + sym + " not listed on chain");
        if (v > UINT64_MAX - genesis[sym]) invalid(loc + ".balances", "supply overflows 64 bits");
        genesis[sym] += v;
      }
    }
    for (const auto& n : c.allowlist) {
      if (!names.contains(n)) unknown("chains." + c.name + ".receiver_policy", "no account " + n);
    }
  }
  for (const auto& a : s.assets) {
    if (genesis[a.symbol] != a.total_supply) {
      invalid("assets." + a.symbol + ".total_supply", "does not equal the sum of genesis balances");
    }
  }

  auto is_node = [&](const std::string& n) { return n == kRelayNode || chain_names.contains(n); };
  for (const auto& l : s.links) {
    if (!is_node(l.from)) unknown("links", "no node " + l.from);
    if (!is_node(l.to)) unknown("links", "no node " + l.to);
    if (l.from == l.to) invalid("links", "self link on " + l.from);
  }
  for (const auto& c : s.chains) {
    const bool linked = std::any_of(s.links.begin(), s.links.end(), [&](const LinkDecl& l) {
      return (l.from == c.name && l.to == kRelayNode) || (l.from == kRelayNode && l.to == c.name);
    });
    if (!linked) {
      s.links.push_back(LinkDecl{c.name, std::string(kRelayNode), netsim::LinkConfig{1, 0, 0, 1}});
    }
  }

  auto account_of = [&](const AccountRef& r, const std::string& loc) -> const AccountDecl& {
    const ChainDecl* c = s.find_chain(r.chain);
    if (c == nullptr) unknown(loc, "no chain " + r.chain);
    for (const auto& a : c->accounts) {
      if (a.name == r.account) return a;
    }
    unknown(loc, "no account " + r.str());
  };

  std::uint64_t last_tick = 0;
  std::set<std::size_t> tampered;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const Event& e = s.events[i];
    const std::string loc = "events[" + std::to_string(i) + "]";
    if (e.tick < last_tick) {
      throw ScenarioError(Code::NonMonotonicTick, loc + ".tick",
                          "tick " + std::to_string(e.tick) + " after " + std::to_string(last_tick));
    }
    last_tick = e.tick;

    if (e.is_submission()) {
      const AccountDecl& from = account_of(e.from, loc + ".from");
      account_of(e.to, loc + ".to");
      if (from.address) invalid(loc + ".from", "receive-only account cannot send");
      const AssetDecl* asset = s.find_asset(e.asset);
      if (asset == nullptr) unknown(loc + ".asset", "no asset " + e.asset);
      if (e.action == Action::BridgeLock && (asset->home != e.from.chain || e.to.chain == e.from.chain)) {
        invalid(loc, "bridge_lock goes from the asset's home chain to another chain");
      }
      if (e.action == Action::BridgeBurn && (asset->home != e.to.chain || e.to.chain == e.from.chain)) {
        invalid(loc, "bridge_burn goes from a remote chain to the asset's home chain");
      }
    } else if (e.action == Action::Partition || e.action == Action::Heal) {
      if (!is_node(e.a)) unknown(loc + ".a", "no node " + e.a);
      if (!is_node(e.b)) unknown(loc + ".b", "no node " + e.b);
      if (e.a == e.b) invalid(loc, "partition needs two distinct nodes");
      if (e.until && *e.until <= e.tick) invalid(loc + ".until", "must be after tick");
    } else {
      if (e.target >= s.events.size()) unknown(loc + ".target", "no event " + std::to_string(e.target));
      const Event& t = s.events[e.target];
      if (!t.is_submission()) invalid(loc + ".target", "target is not a transfer");
      if (!tampered.insert(e.target).second) invalid(loc + ".target", "target already tampered");
      if (e.mutation == Mutation::ReplayNonce && e.tick < t.tick) {
        invalid(loc + ".tick", "replay cannot precede its target");
      }
    }
  }

  const std::uint64_t rt = worst_round_trip(s);
  if (s.escrow_expiry_ticks <= rt) {
    invalid("escrow_expiry_ticks", "must exceed the worst-case round trip of " + std::to_string(rt));
  }
}

std::uint64_t worst_round_trip(const Scenario& s) {
  const std::string relay(kRelayNode);
  std::uint64_t worst = 0;
  for (const auto& a : s.chains) {
    const std::uint64_t out = link_latency(s, a.name, relay);
    const std::uint64_t back = link_latency(s, relay, a.name);
    worst = std::max(worst, out + back);
    for (const auto& b : s.chains) {
      if (a.name == b.name) continue;
      worst = std::max(worst, out + link_latency(s, relay, b.name) +
                                  link_latency(s, b.name, relay) + back);
    }
  }
  return worst;
}

json to_json(const Scenario& s) {
  auto u = [](std::uint64_t v) { return std::to_string(v); };
  json assets = json::array();
  for (const auto& a : s.assets) {
    assets.push_back({{"decimals", u(a.decimals)},
                      {"home", a.home},
                      {"name", a.name},
                      {"symbol", a.symbol},
                      {"total_supply", u(a.total_supply)}});
  }
  json chains = json::array();
  for (const auto& c : s.chains) {
    json accounts = json::array();
    for (const auto& a : c.accounts) {
      json balances = json::object();
      for (const auto& [sym, v] : a.balances) balances[sym] = u(v);
      json j = {{"balances", balances}, {"frozen", a.frozen}, {"name", a.name}};
      if (a.address) j["address"] = a.address->hex();
      accounts.push_back(std::move(j));
    }
    json policy = c.allow_all ? json("allow_all") : json{{"allowlist", c.allowlist}};
    chains.push_back({{"accounts", accounts},
                      {"assets", c.assets},
                      {"external", c.external},
                      {"name", c.name},
                      {"receiver_policy", policy}});
  }
  json links = json::array();
  for (const auto& l : s.links) {
    links.push_back({{"base_latency", u(l.cfg.base_latency)},
                     {"drop", drop_string(l.cfg)},
                     {"from", l.from},
                     {"jitter", u(l.cfg.jitter)},
                     {"to", l.to}});
  }
  json events = json::array();
  for (const auto& e : s.events) {
    json j = {{"action", std::string(action_name(e.action))}, {"tick", u(e.tick)}};
    if (e.is_submission()) {
      j["from"] = e.from.str();
      j["to"] = e.to.str();
      j["asset"] = e.asset;
      j["amount"] = u(e.amount);
      j["fee"] = u(e.fee);
    } else if (e.action == Action::Tamper) {
      j["target"] = u(e.target);
      j["mutation"] = std::string(mutation_name(e.mutation));
    } else {
      j["a"] = e.a;
      j["b"] = e.b;
      if (e.until) j["until"] = u(*e.until);
    }
    events.push_back(std::move(j));
  }
  return {{"assets", assets},
          {"chains", chains},
          {"escrow_expiry_ticks", u(s.escrow_expiry_ticks)},
          {"events", events},
          {"format_version", std::string(kFormatVersion)},
          {"links", links},
          {"max_ticks", u(s.max_ticks)},
          {"profile", std::string(crypto::profile_name(s.profile))},
          {"seed", u(s.seed)}};
}

Digest scenario_hash(const Scenario& s) { return sha256(to_json(s).dump()); }

}  // namespace ztc::scenario
