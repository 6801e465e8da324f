// ztc: run scenarios, verify transcripts, print metrics, derive keys.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ztc/crypto/schnorr.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/scenario/audit.hpp"
#include "ztc/scenario/runner.hpp"
#include "ztc/scenario/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, std::optional<std::uint64_t> max_ticks) {
  using namespace ztc::scenario;
  std::string text;
  if (!read_file(scenario_path, text)) {
    std::cerr << "ztc: cannot read " << scenario_path << "\n";
    return kInputError;
  }
  Scenario sc;
  try {
    sc = parse_scenario(text);
  } catch (const ScenarioError& e) {
    std::cerr << "ztc: " << scenario_error_name(e.code());
    if (e.line()) std::cerr << " at line " << *e.line();
    std::cerr << " (" << e.locus() << "): " << e.what() << "\n";
    return kInputError;
  }
  const RunResult res = run_scenario(sc, RunOptions{seed, max_ticks});
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << res.text)) {
    std::cerr << "ztc: cannot write " << out_path << "\n";
    return kInputError;
  }
  nlohmann::json summary = {{"final_tick", std::to_string(res.final_tick)},
                            {"quiescent", res.quiescent},
                            {"records", std::to_string(res.records.size())},
                            {"status", std::string(run_status_name(res.status))},
                            {"transcript_sha256", ztc::to_hex(res.text_hash())}};
  std::cout << summary.dump(2) << "\n";
  return res.status == RunStatus::Ok ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "ztc: cannot read " << path << "\n";
    return kInputError;
  }
  const auto report = ztc::scenario::verify_transcript(text);
  std::cout << report.to_json().dump(2) << "\n";
  return report.ok() ? kOk : kVerifyFailed;
}

int cmd_metrics(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "ztc: cannot read " << path << "\n";
    return kInputError;
  }
  try {
    std::cout << ztc::scenario::metrics(text).to_json().dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "ztc: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

int cmd_keygen(const std::string& profile_name, std::uint64_t seed) {
  using namespace ztc;
  crypto::Profile profile;
  try {
    profile = crypto::parse_profile(profile_name);
  } catch (const std::exception& e) {
    std::cerr << "ztc: " << e.what() << "\n";
    return kInputError;
  }
  const crypto::Group& g = crypto::Group::get(profile);
  auto rng = netsim::RngStream::fork(seed, "keygen");
  const crypto::Keypair k = crypto::Keypair::generate(rng, g);
  nlohmann::json j = {{"address", ledger::address_of(k.pk, g).hex()},
                      {"pk", "0x" + to_hex(g.encode(k.pk))},
                      {"profile", std::string(crypto::profile_name(profile))},
                      {"seed", std::to_string(seed)},
                      {"sk", "0x" + to_hex(g.encode(k.sk))}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-trust cross-chain transfer simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ZTC_VERSION));

  std::string scenario_path, out_path, transcript_path, profile = "production";
  std::optional<std::uint64_t> seed, max_ticks;
  std::uint64_t keygen_seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write its transcript");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Overrides the scenario seed");
  run->add_option("--out", out_path, "Transcript output file")->required();
  run->add_option("--max-ticks", max_ticks, "Tick budget (default 10000)");

  auto* verify = app.add_subcommand("verify", "Check a transcript offline");
  verify->add_option("--transcript", transcript_path)->required();

  auto* met = app.add_subcommand("metrics", "Summarize a transcript");
  met->add_option("--transcript", transcript_path)->required();

  auto* keygen = app.add_subcommand("keygen", "Derive a keypair from a seed");
  keygen->add_option("--profile", profile)->check(CLI::IsMember({"tiny", "production"}));
  keygen->add_option("--seed", keygen_seed)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  if (*run) return cmd_run(scenario_path, seed, out_path, max_ticks);
  if (*verify) return cmd_verify(transcript_path);
  if (*met) return cmd_metrics(transcript_path);
  return cmd_keygen(profile, keygen_seed);
}
