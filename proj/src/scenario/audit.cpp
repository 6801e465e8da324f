#include "ztc/scenario/audit.hpp"

#include <algorithm>
#include <stdexcept>

#include "ztc/crypto/group.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/scenario/scenario.hpp"
#include "ztc/zkp/tx_proof.hpp"

namespace ztc::scenario {

using nlohmann::json;

namespace {

std::string dec(std::uint64_t v) { return std::to_string(v); }

json opt_dec(const std::optional<std::uint64_t>& v) { return v ? json(dec(*v)) : json(nullptr); }

std::uint64_t u64(const json& j) { return read_u64(j, "value"); }

std::uint64_t u64_or_zero(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? 0 : u64(*it);
}

std::string str_or_empty(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string();
}

Bytes unhex(const json& j) {
  std::string s = j.get<std::string>();
  if (s.starts_with("0x")) s.erase(0, 2);
  return from_hex(s);
}

bool is_decimal(const std::string& s) {
  return !s.empty() && s.size() <= 20 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void collect_strings(const json& j, std::vector<std::string>& out) {
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_structured()) {
    for (const auto& v : j) collect_strings(v, out);
  }
}

}  // namespace

std::uint64_t Metrics::invalid_total() const {
  std::uint64_t n = 0;
  for (const auto& [r, c] : invalid) n += c;
  return n;
}

std::optional<std::uint64_t> Metrics::latency_min() const {
  if (latencies.empty()) return std::nullopt;
  return *std::min_element(latencies.begin(), latencies.end());
}

std::optional<std::uint64_t> Metrics::latency_median() const {
  if (latencies.empty()) return std::nullopt;
  std::vector<std::uint64_t> v = latencies;
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

std::optional<std::uint64_t> Metrics::latency_max() const {
  if (latencies.empty()) return std::nullopt;
  return *std::max_element(latencies.begin(), latencies.end());
}

json Metrics::to_json() const {
  json inv = json::object();
  for (const auto& [r, c] : invalid) inv[r] = dec(c);
  return {{"dropped", dec(dropped)},
          {"invalid", inv},
          {"invalid_total", dec(invalid_total())},
          {"latency", {{"max", opt_dec(latency_max())},
                       {"median", opt_dec(latency_median())},
                       {"min", opt_dec(latency_min())}}},
          {"pending", dec(pending)},
          {"proofs_verified", dec(proofs_verified)},
          {"refunded", dec(refunded)},
          {"refused", dec(refused)},
          {"submitted", dec(submitted)},
          {"timed_out", dec(timed_out)},
          {"valid", dec(valid)}};
}

Metrics compute_metrics(const std::vector<Record>& records) {
  Metrics m;
  std::map<std::string, std::uint64_t> started;  // tx hash -> initiate tick
  for (const Record& r : records) {
    const json& p = r.payload;
    if (r.kind == "Initiate") {
      ++m.submitted;
      started[p.at("tx_hash").get<std::string>()] = r.tick;
    } else if (r.kind == "Tamper") {
      const std::string h = str_or_empty(p, "tx_hash");
      if (p.at("mutation") == "replay_nonce") {
        if (!h.empty()) ++m.submitted;
      } else {
        auto it = started.find(p.at("original_tx_hash").get<std::string>());
        if (it != started.end()) started[h] = it->second;
      }
    } else if (r.kind == "Drop") {
      ++m.dropped;
    } else if (r.kind == "Refused") {
      ++m.refused;
    } else if (r.kind == "TimeoutRefund") {
      ++m.timed_out;
      ++m.refunded;
    } else if (r.kind == "Ingress") {
      if (!p.at("proof_check").is_null()) ++m.proofs_verified;
    } else if (r.kind == "Execute") {
      if (p.at("reverified").get<bool>()) ++m.proofs_verified;
    } else if (r.kind == "Finalize") {
      const std::string result = p.at("result").get<std::string>();
      const std::string outcome = p.at("outcome").get<std::string>();
      if (result == "Valid") {
        if (outcome == "finalized") {
          ++m.valid;
          auto it = started.find(p.at("tx_hash").get<std::string>());
          if (it != started.end()) m.latencies.push_back(r.tick - it->second);
        }
      } else {
        ++m.invalid[result];
        if (outcome == "refunded") ++m.refunded;
      }
    }
  }
  // Timed-out transfers never got a receipt, so they stay in pending.
  const std::uint64_t settled = m.valid + m.invalid_total();
  m.pending = m.submitted > settled ? m.submitted - settled : 0;
  return m;
}

Metrics metrics(std::string_view transcript_text) {
  ParsedTranscript t = parse_transcript(transcript_text);
  std::vector<Record> body;
  for (auto& r : t.records) {
    if (r.kind != "Final") body.push_back(std::move(r));
  }
  try {
    return compute_metrics(body);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("malformed record payload: ") + e.what());
  }
}

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

json VerifyReport::to_json() const {
  json cs = json::array();
  for (const auto& c : checks) {
    cs.push_back({{"detail", c.detail}, {"name", c.name}, {"ok", c.ok}});
  }
  return {{"checks", cs},
          {"first_bad_record", first_bad_record ? json(dec(*first_bad_record)) : json(nullptr)},
          {"ok", ok()}};
}

std::vector<std::string> conservation_violations(const json& header, const json& snapshots) {
  std::vector<std::string> out;
  auto held = [&snapshots](const std::string& asset) {
    std::uint64_t sum = 0;
    for (const auto& [name, snap] : snapshots.items()) {
      for (const auto& [addr, acct] : snap.at("accounts").items()) {
        sum += u64_or_zero(acct.at("balances"), asset);
      }
      for (const auto& [h, e] : snap.at("escrows").items()) {
        if (e.at("asset") == asset) sum += u64(e.at("amount")) + u64(e.at("fee"));
      }
    }
    return sum;
  };

  for (const auto& [symbol, a] : header.at("assets").items()) {
    const std::string id = a.at("id").get<std::string>();
    std::uint64_t total = held(id);
    for (const auto& [name, snap] : snapshots.items()) {
      for (const auto& [key, v] : snap.at("bridge").at("locked").items()) {
        if (key.starts_with(id + "/")) total += u64(v);
      }
    }
    const std::uint64_t supply = u64(a.at("total_supply"));
    if (total != supply) {
      out.push_back(symbol + ": held " + dec(total) + " != supply " + dec(supply));
    }
  }

  for (const auto& [name, snap] : snapshots.items()) {
    const std::string chain_id = snap.at("chain_id").get<std::string>();
    for (const auto& [id, spec] : snap.at("assets").items()) {
      if (!spec.contains("wraps")) continue;
      const std::string key = spec.at("wraps").get<std::string>() + "/" + chain_id;
      const std::uint64_t supply = u64_or_zero(snap.at("bridge").at("wrapped_supply"), key);
      const std::uint64_t total = held(id);
      if (total != supply) {
        out.push_back(spec.at("symbol").get<std::string>() + " on " + name + ": held " +
                      dec(total) + " != wrapped supply " + dec(supply));
      }
    }
  }
  return out;
}

std::vector<std::string> bridge_violations(const json& snapshots) {
  std::vector<std::string> out;
  std::map<std::string, std::uint64_t> locked;
  std::map<std::string, std::uint64_t> wrapped;
  for (const auto& [name, snap] : snapshots.items()) {
    for (const auto& [k, v] : snap.at("bridge").at("locked").items()) locked[k] += u64(v);
    for (const auto& [k, v] : snap.at("bridge").at("wrapped_supply").items()) wrapped[k] += u64(v);
  }
  std::set<std::string> keys;
  for (const auto& [k, v] : locked) keys.insert(k);
  for (const auto& [k, v] : wrapped) keys.insert(k);
  for (const auto& k : keys) {
    const std::uint64_t l = locked.contains(k) ? locked[k] : 0;
    const std::uint64_t w = wrapped.contains(k) ? wrapped[k] : 0;
    if (l != w) out.push_back(k + ": locked " + dec(l) + " != wrapped " + dec(w));
  }
  return out;
}

std::vector<std::string> zero_trust_violations(const json& header, const std::vector<Record>& records,
                                               const std::set<std::uint64_t>& secrets) {
  static const std::set<std::string> kAllowed = {
      "bridge_op", "commitment", "deliver_tick", "envelope", "event", "from",  "kind",
      "proof",     "proof_check", "result",     "sender_pk", "seq",   "to",    "tx", "tx_hash"};
  std::vector<std::string> out;
  const crypto::Group& g = crypto::Group::get(crypto::parse_profile(header.at("profile").get<std::string>()));
  for (const Record& r : records) {
    if (r.actor != kRelayNode) continue;
    const std::string at = "record " + dec(r.index);
    for (const auto& [k, v] : r.payload.items()) {
      if (!kAllowed.contains(k)) out.push_back(at + ": field " + k + " is not public");
    }
    // Public tx fields may coincide with a secret; everything else may not.
    std::set<std::uint64_t> exempt;
    if (r.payload.contains("tx") && r.payload.at("tx").is_string()) {
      const ledger::Transaction tx = ledger::Transaction::deserialize(unhex(r.payload.at("tx")));
      exempt = {tx.amount, tx.fee};
    }
    std::vector<std::string> strings;
    collect_strings(r.payload, strings);
    for (const auto& s : strings) {
      if (is_decimal(s) && secrets.contains(std::stoull(s)) && !exempt.contains(std::stoull(s))) {
        out.push_back(at + ": decimal " + s + " equals a committed balance");
      }
    }
    if (r.payload.contains("proof") && r.payload.at("proof").is_string()) {
      const Bytes proof = unhex(r.payload.at("proof"));
      // Every big-endian 8-byte window; below 2^32 the pattern collides with
      // length prefixes, so those secrets are left to the decimal scan.
      std::uint64_t window = 0;
      for (std::size_t i = 0; i < proof.size(); ++i) {
        window = (window << 8) | proof[i];
        if (i < 7 || window >> 32 == 0) continue;
        if (secrets.contains(window) && !exempt.contains(window)) {
          out.push_back(at + ": proof bytes contain a committed balance");
          break;
        }
      }
      try {
        zkp::decode_tx_proof(proof, g);
      } catch (const DecodeError&) {
        out.push_back(at + ": proof does not decode");
      }
    }
  }
  return out;
}

VerifyReport verify_transcript(std::string_view text) {
  VerifyReport rep;
  const TranscriptLines lines = split_transcript(text);

  Check framing{"framing", true, ""};
  if (!lines.header) {
    framing = {"framing", false, "header: " + lines.header_error};
    rep.first_bad_record = 0;
  } else if (!lines.trailer) {
    framing = {"framing", false, "trailer: " + lines.trailer_error};
  } else if (lines.framing_error) {
    framing = {"framing", false, "record " + dec(*lines.framing_error) + ": bad line framing"};
  }
  rep.checks.push_back(framing);
  if (!lines.header) {
    return rep;
  }

  // Hash chain; stops at the first record that fails.
  std::vector<Record> records;
  Check chain{"hash_chain", true, ""};
  Digest head = genesis_hash(*lines.header);
  for (std::size_t i = 0; i < lines.record_lines.size(); ++i) {
    const std::string& line = lines.record_lines[i];
    std::string why;
    try {
      const json j = json::parse(line);
      if (j.dump() != line) {
        why = "not canonical";
      } else {
        Record r = Record::from_json(j);
        if (r.index != i) {
          why = "index " + dec(r.index) + " out of place";
        } else if (chain_step(head, r) != r.running_hash) {
          why = "running hash mismatch";
        } else {
          head = r.running_hash;
          records.push_back(std::move(r));
        }
      }
    } catch (const std::exception& e) {
      why = e.what();
    }
    if (!why.empty()) {
      chain = {"hash_chain", false, "record " + dec(i) + ": " + why};
      rep.first_bad_record = i;
      break;
    }
  }
  if (chain.ok && lines.framing_error) {
    rep.first_bad_record = *lines.framing_error;
  }
  rep.checks.push_back(chain);
  if (!chain.ok || !lines.trailer) {
    return rep;
  }
  const json& header = *lines.header;
  const json& trailer = *lines.trailer;

  Check fin{"final_record", true, ""};
  try {
    if (records.empty() || records.back().kind != "Final") {
      fin = {"final_record", false, "last record is not Final"};
    } else if (trailer.at("chained_hash").get<std::string>() != to_hex(head)) {
      fin = {"final_record", false, "trailer chained_hash does not match the last record"};
    } else if (records.back().payload.at("trailer_digest").get<std::string>() !=
               to_hex(trailer_digest(trailer))) {
      fin = {"final_record", false, "trailer digest mismatch"};
    }
  } catch (const std::exception& e) {
    fin = {"final_record", false, e.what()};
  }
  rep.checks.push_back(fin);

  std::vector<Record> body = records;
  if (!body.empty() && body.back().kind == "Final") body.pop_back();

  Check proofs{"proofs", true, ""};
  std::uint64_t rechecked = 0;
  try {
    const crypto::Group& g =
        crypto::Group::get(crypto::parse_profile(header.at("profile").get<std::string>()));
    for (const Record& r : body) {
      if (r.kind != "Ingress" || r.payload.at("proof_check").is_null()) continue;
      const json& p = r.payload;
      const ledger::Transaction tx = ledger::Transaction::deserialize(unhex(p.at("tx")));
      const zkp::TxValidityProof proof = zkp::decode_tx_proof(unhex(p.at("proof")), g);
      std::optional<crypto::Element> pk;
      if (!p.at("sender_pk").is_null()) pk = g.decode_element(unhex(p.at("sender_pk")));
      // Without a published commitment there is nothing to verify against.
      const std::string got =
          p.at("commitment").is_null()
              ? zkp::ValidityResult::invalid(zkp::InvalidReason::MalformedProof).to_string()
              : zkp::verify_tx_proof(tx, crypto::Commitment{g.decode_element(unhex(p.at("commitment")))},
                                     proof, pk, g)
                    .to_string();
      if (got != p.at("proof_check").get<std::string>()) {
        proofs = {"proofs", false,
                  "record " + dec(r.index) + ": recorded " + p.at("proof_check").get<std::string>() +
                      ", re-verified " + got};
        rep.first_bad_record = r.index;
        break;
      }
      ++rechecked;
    }
    if (proofs.ok) proofs.detail = dec(rechecked) + " proofs re-verified";
  } catch (const std::exception& e) {
    proofs = {"proofs", false, e.what()};
  }
  rep.checks.push_back(proofs);

  Check cons{"conservation", true, ""};
  try {
    if (!trailer.at("quiescent").get<bool>()) {
      cons.detail = "skipped: run not quiescent";
    } else {
      auto v = conservation_violations(header, trailer.at("snapshots"));
      auto b = bridge_violations(trailer.at("snapshots"));
      v.insert(v.end(), b.begin(), b.end());
      if (!v.empty()) {
        cons = {"conservation", false, v.front()};
      }
    }
  } catch (const std::exception& e) {
    cons = {"conservation", false, e.what()};
  }
  rep.checks.push_back(cons);

  Check met{"metrics", true, ""};
  try {
    if (compute_metrics(body).to_json() != trailer.at("metrics")) {
      met = {"metrics", false, "trailer metrics differ from the records"};
    }
  } catch (const std::exception& e) {
    met = {"metrics", false, e.what()};
  }
  rep.checks.push_back(met);
  return rep;
}

}  // namespace ztc::scenario
