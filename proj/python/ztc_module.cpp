// Python bindings: scenario runs, transcript audits, keys and range proofs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "json.hpp"
#include "ztc/crypto/group.hpp"
#include "ztc/crypto/schnorr.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/scenario/audit.hpp"
#include "ztc/scenario/runner.hpp"
#include "ztc/scenario/scenario.hpp"
#include "ztc/zkp/proofs.hpp"

namespace py = pybind11;
using namespace ztc;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

const crypto::Group& group_of(const std::string& profile) {
  return crypto::Group::get(crypto::parse_profile(profile));
}

ByteView view_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

py::bytes to_bytes(const Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

py::dict run(const std::string& text, std::optional<std::uint64_t> seed,
             std::optional<std::uint64_t> max_ticks) {
  const auto sc = scenario::parse_scenario(text);
  scenario::RunResult res;
  {
    py::gil_scoped_release nogil;
    res = scenario::run_scenario(sc, scenario::RunOptions{seed, max_ticks});
  }
  py::dict d;
  d["status"] = std::string(scenario::run_status_name(res.status));
  d["quiescent"] = res.quiescent;
  d["final_tick"] = res.final_tick;
  d["records"] = res.records.size();
  d["transcript"] = res.text;
  d["transcript_sha256"] = to_hex(res.text_hash());
  return d;
}

py::dict keygen(const std::string& profile, std::uint64_t seed) {
  const auto& g = group_of(profile);
  auto rng = netsim::RngStream::fork(seed, "keygen");
  const auto k = crypto::Keypair::generate(rng, g);
  py::dict d;
  d["address"] = ledger::address_of(k.pk, g).hex();
  d["pk"] = "0x" + to_hex(g.encode(k.pk));
  d["sk"] = "0x" + to_hex(g.encode(k.sk));
  return d;
}

py::bytes commit(const std::string& profile, std::uint64_t value, std::uint64_t blinding) {
  const auto& g = group_of(profile);
  const auto c = crypto::pedersen_commit(g.scalar(value), g.scalar(blinding), g);
  return to_bytes(g.encode(c.element));
}

py::tuple prove_range(const std::string& profile, std::uint64_t value, std::uint64_t blinding,
                      std::size_t n_bits, const std::string& context, std::uint64_t seed) {
  const auto& g = group_of(profile);
  auto rng = netsim::RngStream::fork(seed, "prove_range");
  const auto p = zkp::prove_range(g.scalar(value), g.scalar(blinding), n_bits,
                                  view_of(context), g, rng);
  const auto c = crypto::pedersen_commit(g.scalar(value), g.scalar(blinding), g);
  return py::make_tuple(to_bytes(g.encode(c.element)),
                        to_bytes(zkp::encode_range_proof(p, g)));
}

bool verify_range(const std::string& profile, const std::string& commitment,
                  const std::string& proof, const std::string& context) {
  const auto& g = group_of(profile);
  try {
    const crypto::Commitment c{g.decode_element(view_of(commitment))};
    const auto p = zkp::decode_range_proof(view_of(proof), g);
    return zkp::verify_range(c, p, view_of(context), g);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

PYBIND11_MODULE(ztc, m) {
  m.doc() = "Deterministic zero-trust cross-chain transfer simulator";
  m.attr("__version__") = ZTC_VERSION;

  static py::exception<scenario::ScenarioError> scenario_error(m, "ScenarioError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const scenario::ScenarioError& e) {
      std::string msg = std::string(scenario::scenario_error_name(e.code()));
      if (e.line()) msg += " at line " + std::to_string(*e.line());
      msg += " (" + e.locus() + "): " + e.what();
      py::set_error(scenario_error, msg.c_str());
    }
  });

  m.def("run_scenario", &run, py::arg("scenario"), py::arg("seed") = py::none(),
        py::arg("max_ticks") = py::none(),
        "Run a scenario given as JSON text; returns the transcript and a summary.");
  m.def(
      "verify_transcript",
      [](const std::string& text) { return to_py(scenario::verify_transcript(text).to_json()); },
      py::arg("transcript"));
  m.def(
      "metrics",
      [](const std::string& text) { return to_py(scenario::metrics(text).to_json()); },
      py::arg("transcript"));
  m.def("keygen", &keygen, py::arg("profile"), py::arg("seed"));

  m.def(
      "group_params",
      [](const std::string& profile) {
        const auto& g = group_of(profile);
        py::dict d;
        d["p"] = g.p().get_str();
        d["q"] = g.q().get_str();
        d["g"] = g.g().v.get_str();
        d["h"] = g.h().v.get_str();
        return d;
      },
      py::arg("profile"));
  m.def("commit", &commit, py::arg("profile"), py::arg("value"), py::arg("blinding"));
  m.def("prove_range", &prove_range, py::arg("profile"), py::arg("value"), py::arg("blinding"),
        py::arg("n_bits"), py::arg("context"), py::arg("seed") = 0,
        "Returns (commitment, proof) as bytes.");
  m.def("verify_range", &verify_range, py::arg("profile"), py::arg("commitment"),
        py::arg("proof"), py::arg("context"));
}
