// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "ztc/scenario/audit.hpp"
#include "ztc/scenario/runner.hpp"
#include "ztc/zkp/proofs.hpp"

using namespace ztc;
using namespace ztc::scenario;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

struct Run {
  std::string name;
  Scenario scenario;
  RunResult result;
};

// Corpora are built once and shared between criteria.
struct Corpus {
  std::vector<Run> honest;    // criterion 1
  std::vector<Run> tampered;  // criterion 2, one run per mutation
  std::vector<Run> random;    // criteria 5-7
  double honest_seconds = 0;
};

Corpus& corpus() {
  static Corpus c;
  return c;
}

Run run_named(std::string name, const json& j) {
  Scenario s = testing::parse(j);
  RunResult r = run_scenario(s);
  return Run{std::move(name), std::move(s), std::move(r)};
}

std::string result_of(const Record& r) {
  auto it = r.payload.find("result");
  return it == r.payload.end() ? std::string() : it->get<std::string>();
}

// -- 1 ---------------------------------------------------------------------

Outcome completeness() {
  Outcome o;
  const auto t0 = Clock::now();
  corpus().honest.push_back(run_named("honest", testing::honest_transfers(1, 1000)));
  corpus().honest_seconds = seconds_since(t0);
  const RunResult& r = corpus().honest.back().result;

  std::map<std::string, std::size_t> valid;
  for (const auto& rec : r.records) {
    if (rec.kind == "Ingress" || rec.kind == "Execute" || rec.kind == "Finalize") {
      if (result_of(rec) != "Valid") o.fail(rec.kind + " record " + std::to_string(rec.index) + " is " + result_of(rec));
      ++valid[rec.kind];
    }
    if (rec.kind == "TimeoutRefund" || rec.kind == "Refused" || rec.kind == "Drop") {
      o.fail(rec.kind + " record " + std::to_string(rec.index));
    }
  }
  const Metrics m = metrics(r.text);
  if (valid["Ingress"] != 1000 || valid["Execute"] != 1000 || valid["Finalize"] != 1000) {
    o.fail("expected 1000 valid ingress/execute/finalize records");
  }
  if (m.refunded != 0 || m.valid != 1000) o.fail("metrics disagree");
  if (corpus().honest_seconds >= 60) o.fail("runtime over 60 s");
  if (o.ok) {
    std::ostringstream ss;
    ss << "1000/1000 valid at relay and destination, 0 refunds, " << corpus().honest_seconds << " s";
    o.detail = ss.str();
  }
  return o;
}

// -- 2 ---------------------------------------------------------------------

Outcome soundness() {
  Outcome o;
  const std::set<std::string> allowed = {"NotEnoughBalance", "InvalidSignature", "ExecutionFailed",
                                         "MalformedProof",   "ReplayedNonce",    "UnknownChain"};
  std::map<std::string, std::size_t> reasons;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  for (Mutation m : kAllMutations) {
    const std::string mname(mutation_name(m));
    corpus().tampered.push_back(run_named("tamper/" + mname, testing::tampered_transfers(2, 200, m)));
    const RunResult& r = corpus().tampered.back().result;

    // Replays resend an honest envelope: the original settles, the copy must not.
    const std::size_t honest_ok = m == Mutation::ReplayNonce ? 200 : 0;
    std::size_t valid_exec = 0;
    std::size_t valid_fin = 0;
    std::size_t rejects = 0;
    for (const auto& rec : r.records) {
      if (rec.kind != "Ingress" && rec.kind != "Execute" && rec.kind != "Finalize") continue;
      const std::string res = result_of(rec);
      if (res == "Valid") {
        valid_exec += rec.kind == "Execute";
        valid_fin += rec.kind == "Finalize";
        continue;
      }
      if (!allowed.contains(res)) o.fail(mname + ": reason " + res + " outside the taxonomy");
      if (rec.kind == "Finalize") {
        ++rejects;
        ++reasons[res];
      }
    }
    accepted += valid_exec - std::min(valid_exec, honest_ok) + valid_fin - std::min(valid_fin, honest_ok);
    if (valid_exec > honest_ok || valid_fin > honest_ok) o.fail(mname + ": tampered transfer accepted");
    if (rejects != 200) o.fail(mname + ": " + std::to_string(rejects) + " of 200 rejections reached the origin");
    rejected += rejects;
    // Nothing tampered may reach a receiver.
    const Metrics met = metrics(r.text);
    if (met.valid != honest_ok) o.fail(mname + ": valid count " + std::to_string(met.valid));
  }
  if (o.ok) {
    std::ostringstream ss;
    ss << rejected << " tampered submissions, " << accepted << " accepted; reasons";
    for (const auto& [k, v] : reasons) ss << " " << k << "=" << v;
    o.detail = ss.str();
  }
  return o;
}

// -- 3 ---------------------------------------------------------------------

std::uint64_t brute_log_g(const crypto::Group& g, const crypto::Element& y) {
  crypto::Element acc = g.identity();
  for (std::uint64_t k = 0; k < 101; ++k) {
    if (acc == y) return k;
    acc = g.mul(acc, g.g());
  }
  return UINT64_MAX;
}

Outcome tiny_exhaustive() {
  Outcome o;
  const auto t0 = Clock::now();
  const crypto::Group& g = crypto::Group::tiny();
  netsim::RngStream rng = netsim::RngStream::fork(3, "acceptance/tiny");
  const std::uint64_t u = brute_log_g(g, g.h());

  // (a) every committed value comes back out of a brute-force log
  for (std::uint64_t v = 0; v < 101; ++v) {
    const crypto::Scalar r = g.random_scalar(rng);
    const crypto::Commitment c = crypto::pedersen_commit(g.scalar(v), r, g);
    if (brute_log_g(g, g.mul(c.element, g.inv(g.pow_h(r)))) != v) o.fail("log of value " + std::to_string(v));
  }

  // (b) 5-bit range proofs, honest and with the target moved by one
  std::size_t rejected = 0;
  for (std::uint64_t v = 0; v < 32; ++v) {
    const crypto::Scalar r = g.random_scalar(rng);
    const crypto::Commitment c = crypto::pedersen_commit(g.scalar(v), r, g);
    const Bytes ctx = {static_cast<std::uint8_t>(v)};
    const zkp::RangeProof p = zkp::prove_range(g.scalar(v), r, 5, ctx, g, rng);
    if (!zkp::verify_range(c, p, ctx, g)) o.fail("honest proof for " + std::to_string(v));
    for (const crypto::Element& shifted : {g.mul(c.element, g.g()), g.mul(c.element, g.inv(g.g()))}) {
      if (zkp::verify_range(crypto::Commitment{shifted}, p, ctx, g)) {
        o.fail("off-by-one target accepted for " + std::to_string(v));
      } else {
        ++rejected;
      }
    }
  }

  // (c) special soundness: two challenges on one first message give the witness
  auto extract_bit = [&](const zkp::BitResponse& a, const zkp::BitResponse& b) -> std::pair<unsigned, crypto::Scalar> {
    if (!(a.e1 == b.e1)) return {1, g.mul(g.sub(a.z1, b.z1), g.inverse(g.sub(a.e1, b.e1)))};
    return {0, g.mul(g.sub(a.z0, b.z0), g.inverse(g.sub(a.e0, b.e0)))};
  };
  std::size_t extracted = 0;
  for (int run = 0; run < 100; ++run) {
    netsim::RngStream fork = netsim::RngStream::fork(3, "acceptance/extract/" + std::to_string(run));
    const std::uint64_t v = fork.uniform_inclusive(31);
    const crypto::Scalar r = g.random_scalar(fork);
    const crypto::Commitment target = crypto::pedersen_commit(g.scalar(v), r, g);
    zkp::RangeProverSession s(g, g.scalar(v), r, 5, fork);
    zkp::RangeChallenges c1, c2;
    for (int i = 0; i < 5; ++i) {
      const crypto::Scalar x = g.random_scalar(fork);
      c1.bit_challenges.push_back(x);
      c2.bit_challenges.push_back(g.add(x, g.scalar(1 + fork.uniform_inclusive(99))));
    }
    c1.aggregation_challenges = {g.random_scalar(fork)};
    c2.aggregation_challenges = {g.add(c1.aggregation_challenges[0], g.scalar(1 + fork.uniform_inclusive(99)))};
    const zkp::RangeResponse r1 = s.respond(c1);
    const zkp::RangeResponse r2 = s.respond(c2);
    if (!zkp::verify_range_interactive(g, target, s.first_message(), c1, r1) ||
        !zkp::verify_range_interactive(g, target, s.first_message(), c2, r2)) {
      o.fail("forked transcript does not verify");
      continue;
    }
    std::uint64_t value = 0;
    crypto::Scalar blinding;
    for (int i = 0; i < 5; ++i) {
      const auto [b, ri] = extract_bit(r1.bit_responses[i], r2.bit_responses[i]);
      value += std::uint64_t{b} << i;
      blinding = g.add(blinding, g.mul(ri, g.scalar(std::uint64_t{1} << i)));
    }
    const crypto::Scalar x = g.mul(g.sub(r1.aggregation_s[0], r2.aggregation_s[0]),
                                   g.inverse(g.sub(c1.aggregation_challenges[0], c2.aggregation_challenges[0])));
    blinding = g.add(blinding, x);
    // brute force: log_G(target) = value + u * blinding
    const std::uint64_t l = brute_log_g(g, target.element);
    const crypto::Scalar expect = g.add(g.scalar(value), g.mul(g.scalar(u), blinding));
    if (value != v || !(blinding == r) || !(g.scalar(l) == expect)) {
      o.fail("extractor mismatch on fork " + std::to_string(run));
    } else {
      ++extracted;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 30) o.fail("runtime over 30 s");
  if (o.ok) {
    std::ostringstream ss;
    ss << "101/101 logs, 32 range proofs with " << rejected << "/64 shifted targets rejected, " << extracted
       << "/100 extractions, " << secs << " s";
    o.detail = ss.str();
  }
  return o;
}

// -- 4 ---------------------------------------------------------------------

// Two-sample chi-square over the categories either sample hit.
double two_sample_chi2(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b,
                       std::size_t& categories) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  categories = keys.size();
  double stat = 0;
  for (const auto& k : keys) {
    const double x = a.contains(k) ? static_cast<double>(a.at(k)) : 0.0;
    const double y = b.contains(k) ? static_cast<double>(b.at(k)) : 0.0;
    stat += (x - y) * (x - y) / (x + y);
  }
  return stat;
}

Outcome zero_knowledge() {
  Outcome o;
  const crypto::Group& g = crypto::Group::tiny();
  netsim::RngStream honest_rng = netsim::RngStream::fork(4, "acceptance/zk/honest");
  netsim::RngStream sim_rng = netsim::RngStream::fork(4, "acceptance/zk/sim");
  const crypto::Scalar blinding = g.scalar(29);
  const crypto::Commitment c = crypto::pedersen_commit(g.scalar(1), blinding, g);

  constexpr std::size_t kSamples = 10'000;
  constexpr std::size_t kCoords = 6;
  const char* names[kCoords] = {"a0", "a1", "e0", "e1", "z0", "z1"};
  std::map<std::string, std::size_t> honest[kCoords];
  std::map<std::string, std::size_t> sim[kCoords];
  std::size_t sim_ok = 0;

  auto tally = [&](std::map<std::string, std::size_t>* hist, const zkp::BitProof& p) {
    ++hist[0][p.a0.v.get_str()];
    ++hist[1][p.a1.v.get_str()];
    ++hist[2][p.e0.v.get_str()];
    ++hist[3][p.e1.v.get_str()];
    ++hist[4][p.z0.v.get_str()];
    ++hist[5][p.z1.v.get_str()];
  };
  for (std::uint32_t i = 0; i < kSamples; ++i) {
    ByteWriter w;
    w.put_u32(i);
    const Bytes ctx = w.take();
    const auto [hc, hp] = zkp::prove_bit(g.scalar(1), blinding, ctx, g, honest_rng);
    if (!(hc == c)) o.fail("honest commitment differs");
    tally(honest, hp);
    const zkp::BitProof sp = zkp::simulate_bit(c, ctx, g, sim_rng);
    sim_ok += zkp::verify_bit(c, sp, ctx, g);
    tally(sim, sp);
  }
  if (sim_ok != kSamples) o.fail(std::to_string(kSamples - sim_ok) + " simulated proofs do not verify");

  std::ostringstream ss;
  ss << "simulated verify " << sim_ok << "/" << kSamples << ";";
  for (std::size_t k = 0; k < kCoords; ++k) {
    std::size_t cats = 0;
    const double stat = two_sample_chi2(honest[k], sim[k], cats);
    const double crit = boost::math::quantile(boost::math::chi_squared(static_cast<double>(cats - 1)), 0.99);
    ss << " " << names[k] << " chi2=" << static_cast<int>(stat) << "/" << static_cast<int>(crit) << " (df " << cats - 1
       << ")";
    if (stat > crit) o.fail(std::string(names[k]) + " distributions differ at the 99% level");
  }
  if (o.ok) o.detail = ss.str();
  return o;
}

// -- 5 ---------------------------------------------------------------------

void build_random_corpus() {
  if (!corpus().random.empty()) return;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    corpus().random.push_back(run_named("random/" + std::to_string(seed), testing::random_scenario(seed)));
  }
}

Outcome determinism() {
  Outcome o;
  build_random_corpus();
  for (std::size_t i = 0; i < 20; ++i) {
    const Run& first = corpus().random[i];
    const RunResult again = run_scenario(first.scenario);
    if (again.text_hash() != first.result.text_hash()) o.fail(first.name + " differs between runs");
  }
  if (o.ok) o.detail = "20/20 scenarios reproduce byte for byte";
  return o;
}

// -- 6 ---------------------------------------------------------------------

Outcome conservation() {
  Outcome o;
  build_random_corpus();
  std::map<std::string, std::size_t> seen;
  for (const Run& run : corpus().random) {
    const RunResult& r = run.result;
    if (r.status != RunStatus::Ok || !r.quiescent) {
      o.fail(run.name + " did not reach quiescence");
      continue;
    }
    const json& snaps = r.trailer.at("snapshots");
    if (testing::holdings_of(snaps) != testing::naive_interpreter(run.scenario, r.records)) {
      o.fail(run.name + " differs from the naive oracle");
    }
    const auto v = conservation_violations(r.header, snaps);
    if (!v.empty()) o.fail(run.name + ": " + v.front());
    for (const auto& rec : r.records) {
      if (rec.kind == "Drop" || rec.kind == "Partition" || rec.kind == "TimeoutRefund" || rec.kind == "Tamper") {
        ++seen[rec.kind];
      }
      if (rec.kind == "Execute" && result_of(rec) == "Valid") ++seen["Execute"];
      if (rec.kind == "Ingress" && rec.payload.contains("bridge_op") && result_of(rec) == "Valid") ++seen["bridge"];
    }
  }
  for (const char* k : {"Drop", "Partition", "TimeoutRefund", "bridge"}) {
    if (!seen[k]) o.fail(std::string("corpus has no ") + k + " records");
  }
  if (o.ok) {
    std::ostringstream ss;
    ss << "100/100 match the oracle and conserve supply; corpus has";
    for (const auto& [k, v] : seen) ss << " " << k << "=" << v;
    o.detail = ss.str();
  }
  return o;
}

// -- 7 ---------------------------------------------------------------------

Outcome bridge_invariant() {
  Outcome o;
  build_random_corpus();
  std::size_t checked = 0;
  for (const Run& run : corpus().random) {
    const auto v = bridge_violations(run.result.trailer.at("snapshots"));
    if (!v.empty()) o.fail(run.name + ": " + v.front());
    ++checked;
  }
  if (o.ok) o.detail = "locked == wrapped_supply in " + std::to_string(checked) + " scenarios";
  return o;
}

// -- 8 ---------------------------------------------------------------------

template <class F>
void each_run(F f) {
  for (const auto* set : {&corpus().honest, &corpus().tampered, &corpus().random}) {
    for (const Run& r : *set) f(r);
  }
}

Outcome zero_trust() {
  Outcome o;
  build_random_corpus();
  std::size_t records = 0;
  std::size_t runs = 0;
  each_run([&](const Run& run) {
    const auto v = zero_trust_violations(run.result.header, run.result.records, run.result.committed_balances);
    if (!v.empty()) o.fail(run.name + ": " + v.front());
    for (const auto& rec : run.result.records) records += rec.actor == "relay";
    ++runs;
  });
  if (o.ok) {
    o.detail = std::to_string(records) + " relay records in " + std::to_string(runs) +
               " transcripts, no plaintext balances";
  }
  return o;
}

// -- 9 ---------------------------------------------------------------------

Outcome verify_round_trip() {
  Outcome o;
  build_random_corpus();
  netsim::RngStream rng = netsim::RngStream::fork(9, "acceptance/flip");
  std::size_t clean = 0;
  std::size_t caught = 0;
  std::size_t runs = 0;
  each_run([&](const Run& run) {
    ++runs;
    const std::string& text = run.result.text;
    const VerifyReport rep = verify_transcript(text);
    if (!rep.ok()) {
      o.fail(run.name + " does not verify: " + rep.to_json().dump());
      return;
    }
    ++clean;

    // Line 0 is the header, records follow one per line.
    std::vector<std::size_t> starts = {0};
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') starts.push_back(i + 1);
    }
    const std::size_t n = run.result.records.size();
    const std::size_t idx = rng.uniform_inclusive(n - 1);
    const std::size_t begin = starts[1 + idx];
    const std::size_t len = starts[2 + idx] - 1 - begin;
    std::string damaged = text;
    const std::size_t pos = begin + rng.uniform_inclusive(len - 1);
    char flipped;
    do {
      flipped = static_cast<char>(damaged[pos] ^ static_cast<char>(1 + rng.uniform_inclusive(254)));
    } while (flipped == '\n');
    damaged[pos] = flipped;
    const VerifyReport bad = verify_transcript(damaged);
    if (bad.ok() || bad.first_bad_record != idx) {
      o.fail(run.name + ": flip in record " + std::to_string(idx) + " reported at " +
             (bad.first_bad_record ? std::to_string(*bad.first_bad_record) : std::string("none")));
    } else {
      ++caught;
    }
  });
  if (o.ok) {
    o.detail = std::to_string(clean) + "/" + std::to_string(runs) + " verify, " + std::to_string(caught) + "/" +
               std::to_string(runs) + " flips pinned to their record";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"completeness", completeness},       {"soundness", soundness},
      {"tiny_exhaustive", tiny_exhaustive}, {"zero_knowledge", zero_knowledge},
      {"determinism", determinism},         {"conservation_oracle", conservation},
      {"bridge_invariant", bridge_invariant}, {"zero_trust_audit", zero_trust},
      {"transcript_verify", verify_round_trip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s [%.1f s]\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed;
}
