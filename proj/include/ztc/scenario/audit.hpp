#pragma once

// Offline checks over a transcript: hash chain, proof re-verification,
// conservation, metrics, and the zero-trust scan of relay records.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ztc/scenario/transcript.hpp"

namespace ztc::scenario {

struct Metrics {
  std::uint64_t submitted = 0;
  std::uint64_t valid = 0;
  std::map<std::string, std::uint64_t> invalid;  // by reason
  std::uint64_t pending = 0;
  std::uint64_t dropped = 0;
  std::uint64_t refunded = 0;
  std::uint64_t timed_out = 0;
  std::uint64_t refused = 0;
  std::uint64_t proofs_verified = 0;
  /// End-to-end ticks (initiate to Valid finalize), in record order.
  std::vector<std::uint64_t> latencies;

  std::uint64_t invalid_total() const;
  std::optional<std::uint64_t> latency_min() const;
  /// Lower median.
  std::optional<std::uint64_t> latency_median() const;
  std::optional<std::uint64_t> latency_max() const;

  nlohmann::json to_json() const;
};

/// submitted counts initiated transfers plus replayed envelopes; valid and
/// invalid count receipts settled at the origin; pending is the rest,
/// including transfers refunded by timeout.
Metrics compute_metrics(const std::vector<Record>& records);
/// Throws std::invalid_argument if the transcript cannot be parsed.
Metrics metrics(std::string_view transcript_text);

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::optional<std::size_t> first_bad_record;

  bool ok() const;
  nlohmann::json to_json() const;
};

/// Never throws; every problem becomes a failed check.
VerifyReport verify_transcript(std::string_view text);

/// Per-asset supply check over final snapshots (keyed by chain name).
std::vector<std::string> conservation_violations(const nlohmann::json& header,
                                                 const nlohmann::json& snapshots);
/// locked == wrapped_supply for every (asset, remote) pair in the snapshots.
std::vector<std::string> bridge_violations(const nlohmann::json& snapshots);

/// Relay-logged records may carry commitments and public tx fields only.
/// `secrets` are balances the provers committed to.
std::vector<std::string> zero_trust_violations(const nlohmann::json& header,
                                               const std::vector<Record>& records,
                                               const std::set<std::uint64_t>& secrets);

}  // namespace ztc::scenario
