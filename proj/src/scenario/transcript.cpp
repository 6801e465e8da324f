#include "ztc/scenario/transcript.hpp"

#include <stdexcept>

#include "ztc/scenario/scenario.hpp"

namespace ztc::scenario {

using nlohmann::json;

namespace {

const std::string kHeadPrefix = std::string(R"({"format_version":")") + std::string(kFormatVersion) +
                                R"(","header":)";
const std::string kHeadSuffix = R"(,"records":[)";
const std::string kTailPrefix = R"(],"trailer":)";

std::uint64_t u64_field(const json& j, const char* key) {
  return read_u64(j.at(key), key);
}

}  // namespace

json Record::to_json(bool with_hash) const {
  json j = {{"actor", actor},
            {"index", std::to_string(index)},
            {"kind", kind},
            {"payload", payload},
            {"tick", std::to_string(tick)}};
  if (with_hash) {
    j["running_hash"] = to_hex(running_hash);
  }
  return j;
}

Record Record::from_json(const json& j) {
  if (!j.is_object() || j.size() != 6) {
    throw std::invalid_argument("record must have exactly six fields");
  }
  Record r;
  r.index = u64_field(j, "index");
  r.tick = u64_field(j, "tick");
  r.actor = j.at("actor").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.payload = j.at("payload");
  const Bytes h = from_hex(j.at("running_hash").get<std::string>());
  if (h.size() != r.running_hash.size()) {
    throw std::invalid_argument("running_hash must be 32 bytes");
  }
  std::copy(h.begin(), h.end(), r.running_hash.begin());
  return r;
}

Digest genesis_hash(const json& header) { return sha256(header.dump()); }

Digest chain_step(const Digest& prev, const Record& r) {
  ByteWriter w;
  w.put_raw(prev);
  w.put_raw(as_bytes(r.to_json(false).dump()));
  return sha256(w.bytes());
}

Digest trailer_digest(const json& trailer) {
  json t = trailer;
  t.erase("chained_hash");
  return sha256(t.dump());
}

TranscriptBuilder::TranscriptBuilder(json header)
    : header_(std::move(header)), head_(genesis_hash(header_)) {}

const Record& TranscriptBuilder::append(std::uint64_t tick, std::string actor, std::string kind,
                                        json payload) {
  Record r;
  r.index = records_.size();
  r.tick = tick;
  r.actor = std::move(actor);
  r.kind = std::move(kind);
  r.payload = std::move(payload);
  r.running_hash = chain_step(head_, r);
  head_ = r.running_hash;
  records_.push_back(std::move(r));
  return records_.back();
}

std::string TranscriptBuilder::render(json trailer) const {
  trailer["chained_hash"] = to_hex(head_);
  std::string out = kHeadPrefix + header_.dump() + kHeadSuffix + "\n";
  for (std::size_t i = 0; i < records_.size(); ++i) {
    out += records_[i].to_json().dump();
    if (i + 1 < records_.size()) out += ",";
    out += "\n";
  }
  out += kTailPrefix + trailer.dump() + "}\n";
  return out;
}

TranscriptLines split_transcript(std::string_view text) {
  TranscriptLines t;
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.size() < 2) {
    t.header_error = "transcript has fewer than two lines";
    return t;
  }

  std::string_view head = lines.front();
  if (head.starts_with(kHeadPrefix) && head.ends_with(kHeadSuffix) &&
      head.size() >= kHeadPrefix.size() + kHeadSuffix.size()) {
    head.remove_prefix(kHeadPrefix.size());
    head.remove_suffix(kHeadSuffix.size());
    try {
      json h = json::parse(head);
      if (h.dump() == head) {
        t.header = std::move(h);
      } else {
        t.header_error = "header is not canonical";
      }
    } catch (const json::exception& e) {
      t.header_error = e.what();
    }
  } else {
    t.header_error = "bad header framing";
  }

  std::string_view tail = lines.back();
  if (tail.starts_with(kTailPrefix) && tail.ends_with("}") && tail.size() > kTailPrefix.size()) {
    tail.remove_prefix(kTailPrefix.size());
    tail.remove_suffix(1);
    try {
      json tr = json::parse(tail);
      if (tr.dump() == tail) {
        t.trailer = std::move(tr);
      } else {
        t.trailer_error = "trailer is not canonical";
      }
    } catch (const json::exception& e) {
      t.trailer_error = e.what();
    }
  } else {
    t.trailer_error = "bad trailer framing";
  }

  const std::size_t n = lines.size() - 2;
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view l = lines[i + 1];
    const bool last = i + 1 == n;
    if (!last) {
      if (l.ends_with(",")) {
        l.remove_suffix(1);
      } else if (!t.framing_error) {
        t.framing_error = i;
      }
    } else if (l.ends_with(",") && !t.framing_error) {
      t.framing_error = i;
    }
    t.record_lines.emplace_back(l);
  }
  return t;
}

ParsedTranscript parse_transcript(std::string_view text) {
  TranscriptLines lines = split_transcript(text);
  if (!lines.header) throw std::invalid_argument("transcript header: " + lines.header_error);
  if (!lines.trailer) throw std::invalid_argument("transcript trailer: " + lines.trailer_error);
  if (lines.framing_error) {
    throw std::invalid_argument("record " + std::to_string(*lines.framing_error) + ": bad framing");
  }
  ParsedTranscript p;
  p.header = std::move(*lines.header);
  p.trailer = std::move(*lines.trailer);
  for (std::size_t i = 0; i < lines.record_lines.size(); ++i) {
    try {
      p.records.push_back(Record::from_json(json::parse(lines.record_lines[i])));
    } catch (const std::exception& e) {
      throw std::invalid_argument("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return p;
}

}  // namespace ztc::scenario
