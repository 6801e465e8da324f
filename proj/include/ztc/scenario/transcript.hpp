#pragma once

// Run transcripts. On disk:
//
//   {"format_version":"1","header":{...},"records":[
//   {record 0},
//   ...
//   {record n-1}
//   ],"trailer":{...}}
//
// which is one canonical JSON document with one record per line, so damage
// can be pinned to a record. running_hash of record i is
// SHA-256(running_hash[i-1] || compact record without running_hash), with
// SHA-256(compact header) before record 0.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ztc/common/bytes.hpp"

namespace ztc::scenario {

struct Record {
  std::uint64_t index = 0;
  std::uint64_t tick = 0;
  std::string actor;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();
  Digest running_hash{};

  nlohmann::json to_json(bool with_hash = true) const;
  static Record from_json(const nlohmann::json& j);
};

Digest genesis_hash(const nlohmann::json& header);
Digest chain_step(const Digest& prev, const Record& r);
/// SHA-256 of the trailer without its chained_hash field.
Digest trailer_digest(const nlohmann::json& trailer);

class TranscriptBuilder {
 public:
  explicit TranscriptBuilder(nlohmann::json header);

  const Record& append(std::uint64_t tick, std::string actor, std::string kind,
                       nlohmann::json payload);
  const std::vector<Record>& records() const { return records_; }
  const nlohmann::json& header() const { return header_; }
  const Digest& head() const { return head_; }

  /// Sets trailer.chained_hash to the last running hash and renders the text.
  std::string render(nlohmann::json trailer) const;

 private:
  nlohmann::json header_;
  std::vector<Record> records_;
  Digest head_;
};

/// Transcript split into lines, each parsed independently.
struct TranscriptLines {
  std::optional<nlohmann::json> header;
  std::string header_error;
  std::vector<std::string> record_lines;
  /// Index of the first record line whose framing (trailing comma) is wrong.
  std::optional<std::size_t> framing_error;
  std::optional<nlohmann::json> trailer;
  std::string trailer_error;
};

TranscriptLines split_transcript(std::string_view text);

/// Strict parse for tools that need the whole thing; throws on any damage.
struct ParsedTranscript {
  nlohmann::json header;
  std::vector<Record> records;
  nlohmann::json trailer;
};
ParsedTranscript parse_transcript(std::string_view text);

}  // namespace ztc::scenario
