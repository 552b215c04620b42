// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhelab/qhelab.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format = "text";
  unsigned jobs = 1;
};

// Owned string from the C API.
struct CString {
  char* p = nullptr;
  ~CString() { qhe_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct CircuitHandle {
  qhe_circuit* p = nullptr;
  ~CircuitHandle() { qhe_circuit_free(p); }
};

// Library failures: parse and argument errors are usage errors.
int status_exit(qhe_status s) {
  const std::string msg = qhe_last_error();
  if (s == QHE_ERR_PARSE || msg.empty()) {
    std::cerr << "error: " << qhe_status_name(s) << (msg.empty() ? "" : ": " + msg) << "\n";
  } else {
    std::cerr << "error: " << msg << "\n";
  }
  return s == QHE_ERR_PARSE || s == QHE_ERR_INVALID || s == QHE_ERR_ORACLE_CAP ? kExitUsage : kExitFail;
}

std::uint64_t need_seed(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("QHELAB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("QHELAB_SEED is not an unsigned integer: '") + env + "'");
  }
  throw UsageError("this subcommand is randomized: pass --seed or set QHELAB_SEED");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + c.output + "'");
  out << text;
}

void check_format(const Common& c, bool csv_ok) {
  if (c.format == "text" || c.format == "json" || (csv_ok && c.format == "csv")) return;
  throw UsageError("unsupported --format '" + c.format + "' for this subcommand");
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void add_common(CLI::App* sub, Common& c, bool randomized) {
  if (randomized) sub->add_option("--seed", c.seed, "RNG seed (default: $QHELAB_SEED)");
  sub->add_option("-o,--output", c.output, "write the report here instead of stdout");
  sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("-j,--jobs", c.jobs, "worker thread cap")->check(CLI::Range(1u, 256u));
}

std::string transcript_text(const json& t) {
  std::string s;
  for (const auto& m : t) {
    s += "  " + m["sender"].get<std::string>() + " -> " + m["kind"].get<std::string>() + " " +
         m["label"].get<std::string>();
    if (m.contains("bits")) {
      s += " [";
      for (const auto& b : m["bits"]) s += std::to_string(b.get<int>());
      s += "]";
    } else if (m.contains("qubits")) {
      s += " (" + std::to_string(m["qubits"].get<std::size_t>()) + " qubits)";
    }
    s += "\n";
  }
  return s;
}

// ---------------------------------------------------------------- subcommands

int cmd_roundtrip(const Common& c, const std::string& scheme, unsigned m, const std::string& circuit_path,
                  const std::string& plaintext) {
  check_format(c, false);
  const auto seed = need_seed(c);
  CircuitHandle circ;
  if (auto s = qhe_circuit_load(circuit_path.c_str(), &circ.p); s != QHE_OK) return status_exit(s);
  CString rep;
  if (auto s = qhe_roundtrip(scheme.c_str(), m, circ.p, plaintext.c_str(), seed, &rep.p); s != QHE_OK) {
    return status_exit(s);
  }
  const auto j = json::parse(rep.str());
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, "scheme " + j["scheme"].get<std::string>() + ", backend " + j["backend"].get<std::string>() +
                "\ndistance " + fmt(j["distance"]) + "\n" + transcript_text(j["transcript"]));
  }
  return j["pass"].get<bool>() ? kExitOk : kExitFail;
}

int cmd_security(const Common& c, const std::string& scheme, unsigned m, unsigned rows, const std::string& inputs,
                 std::size_t samples) {
  check_format(c, false);
  const auto seed = need_seed(c);
  CString rep;
  if (auto s = qhe_security(scheme.c_str(), m, rows, inputs.c_str(), samples, seed, c.jobs, &rep.p); s != QHE_OK) {
    return status_exit(s);
  }
  const auto j = json::parse(rep.str());
  if (c.format == "json" || !c.output.empty()) {
    emit(c, j.dump(2) + "\n");
  }
  if (c.format == "text") {
    std::string line = "delta " + fmt(j["delta"]) + " (" + j["method"].get<std::string>() + ")";
    if (j.contains("bound")) line += "  bound " + fmt(j["bound"]);
    std::cout << line << "\n";
  }
  return j.value("within_bound", true) ? kExitOk : kExitFail;
}

int cmd_qec(const Common& c, const std::string& code, const std::string& plaintext, const std::string& error) {
  check_format(c, false);
  const auto seed = need_seed(c);
  const bool named = code == "repetition" || code == "phase-flip" || code == "steane";
  const std::string code_arg = named ? code : read_file(code);
  CString rep;
  if (auto s = qhe_qec_demo(code_arg.c_str(), plaintext.c_str(), error.c_str(), seed, &rep.p); s != QHE_OK) {
    return status_exit(s);
  }
  const auto j = json::parse(rep.str());
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else {
    std::string s = "code " + j["code"].get<std::string>() + " [[" + std::to_string(j["n"].get<int>()) + "," +
                    std::to_string(j["k"].get<int>()) + "]]\n";
    for (const auto& r : j["runs"]) {
      std::string syn;
      for (const auto& b : r["syndrome"]) syn += std::to_string(b.get<int>());
      s += "  error " + r["error"].get<std::string>() + "  syndrome " + syn + "  correction " +
           r["correction"].get<std::string>() + "  " + (r["recovered"].get<bool>() ? "recovered" : "FAILED") + "\n";
    }
    emit(c, s);
  }
  return j["all_recovered"].get<bool>() ? kExitOk : kExitFail;
}

int cmd_tgate(const Common& c, const std::string& variant, unsigned m, const std::string& plaintext,
              std::size_t trials, const std::string& transcript_path) {
  check_format(c, false);
  const auto seed = need_seed(c);
  CString rep;
  if (auto s = qhe_t_gate(variant.c_str(), m, plaintext.c_str(), trials, seed, &rep.p); s != QHE_OK) {
    return status_exit(s);
  }
  const auto j = json::parse(rep.str());
  if (!transcript_path.empty()) {
    std::ofstream out(transcript_path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + transcript_path + "'");
    for (const auto& msg : j["transcript"]) out << msg.dump() << "\n";
  }
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, variant + " T on |" + plaintext + ">: " + std::to_string(j["successes"].get<std::size_t>()) + "/" +
                std::to_string(trials) + " applied T (rate " + fmt(j["success_rate"]) + "), max distance " +
                fmt(j["max_distance"]) + "\nfirst transcript:\n" + transcript_text(j["transcript"]));
  }
  return j["pass"].get<bool>() ? kExitOk : kExitFail;
}

int cmd_cv(const Common& c, std::size_t trials, double tol) {
  check_format(c, false);
  const auto seed = need_seed(c);
  CString rep;
  if (auto s = qhe_cv_check(trials, seed, tol, &rep.p); s != QHE_OK) return status_exit(s);
  const auto j = json::parse(rep.str());
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, "trials " + std::to_string(trials) + "\nmax transport residual " + fmt(j["max_identity_residual"]) +
                "\n" + (j["pass"].get<bool>() ? "pass" : "FAIL") + "\n");
  }
  return j["pass"].get<bool>() ? kExitOk : kExitFail;
}

int cmd_resources(const Common& c, const json& params, const std::string& grid) {
  if (c.format != "json" && c.format != "csv") throw UsageError("resources writes --format json or csv");
  CString table;
  const std::string p = params.dump();
  if (auto s = qhe_resources(p.c_str(), grid.c_str(), c.format.c_str(), &table.p); s != QHE_OK) {
    return status_exit(s);
  }
  emit(c, c.format == "json" ? json::parse(table.str()).dump(2) + "\n" : table.str());
  return kExitOk;
}

int cmd_audit(const Common& c, const std::string& config_path, double max_tv) {
  check_format(c, false);
  const std::string text = read_file(config_path);
  const std::string base = std::filesystem::path(config_path).parent_path().string();
  CString rep;
  if (auto s = qhe_audit(text.c_str(), base.empty() ? "." : base.c_str(), c.jobs, &rep.p); s != QHE_OK) {
    return status_exit(s);
  }
  const auto j = json::parse(rep.str());
  const bool ok = j["max_tv"].get<double>() < max_tv;
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else {
    std::string s = "samples per plaintext " + std::to_string(j["samples"].get<std::size_t>()) + "\n";
    for (const auto& slot : j["slots"]) {
      s += "  slot " + std::to_string(slot["index"].get<std::size_t>()) + " " + slot["label"].get<std::string>() +
           " (" + slot["sender"].get<std::string>() + ")  tv " + fmt(slot["tv"]) + "\n";
    }
    s += "max tv " + fmt(j["max_tv"]) + (ok ? "" : "  LEAK FLAGGED") + "\n";
    emit(c, s);
  }
  return ok ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qhelab: quantum homomorphic encryption and error correction laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qhe_version()));
  Common common;

  std::vector<std::string> input_list{"0", "1"};
  std::string scheme, circuit, plaintext = "0", code = "repetition", error = "all";
  std::string variant = "deterministic", transcript_path, config, ntot, params_path;
  unsigned m = 1, rows = 0;
  std::size_t samples = 0, trials = 100;
  double tol = 1e-10, max_tv = 0.05;

  auto* rt = app.add_subcommand("roundtrip", "encrypt, evaluate, decrypt and compare with plain evaluation");
  rt->add_option("scheme", scheme, "pauli or perm")->required()->check(CLI::IsMember({"pauli", "perm"}));
  rt->add_option("-c,--circuit", circuit, "circuit file")->required();
  rt->add_option("-i,--input", plaintext, "plaintext, e.g. 0, +, 0+1, \"0,+i\"");
  rt->add_option("-m", m, "permutation key columns per half")->check(CLI::PositiveNumber);
  add_common(rt, common, true);

  auto* sec = app.add_subcommand("security", "maximal trace distance between encrypted inputs");
  sec->add_option("scheme", scheme, "pauli, phase or perm")->required();
  sec->add_option("-i,--input", input_list, "plaintext; repeat for each input (default: 0 and 1)");
  sec->add_option("-m", m, "permutation key columns per half")->check(CLI::PositiveNumber);
  sec->add_option("--rows", rows, "permutation data rows (default: input qubits)");
  sec->add_option("--samples", samples, "keys to sample when the key space is too large to sweep");
  add_common(sec, common, true);

  auto* qec = app.add_subcommand("qec-demo", "error injection and correction on encrypted code states");
  qec->add_option("--code", code, "repetition, phase-flip, steane or a code file");
  qec->add_option("-i,--input", plaintext, "logical plaintext");
  qec->add_option("--error", error, "Pauli error, or 'all' single-qubit errors");
  add_common(qec, common, true);

  auto* tg = app.add_subcommand("t-gate", "T-gate gadgets with a transcript dump");
  tg->add_option("--variant", variant, "deterministic, probabilistic or pauli")
      ->check(CLI::IsMember({"deterministic", "probabilistic", "pauli"}));
  tg->add_option("-m", m, "permutation key columns per half")->check(CLI::PositiveNumber);
  tg->add_option("-i,--input", plaintext, "one-qubit plaintext");
  tg->add_option("--trials", trials, "sessions to run")->check(CLI::PositiveNumber);
  tg->add_option("--transcript", transcript_path, "write the first transcript as JSON lines");
  add_common(tg, common, true);

  auto* cv = app.add_subcommand("cv-check", "symplectic identity suite for displacement keys");
  cv->add_option("--trials", trials, "random 3-mode circuits")->check(CLI::PositiveNumber);
  cv->add_option("--tol", tol, "residual tolerance");
  add_common(cv, common, true);

  auto* res = app.add_subcommand("resources", "fault-tolerant resource tradeoff table");
  bool fig5 = false, no_k = false;
  std::optional<double> p0, pthr, a, ptarget;
  std::optional<unsigned> depth, k;
  std::optional<std::size_t> s_rows;
  res->add_flag("--fig5", fig5, "preset: p0 1e-6, target 1e-30, threshold 1e-3, a 10, depth 1, k 10");
  res->add_option("--params", params_path, "JSON file with the parameters");
  res->add_option("--p0", p0, "physical error probability");
  res->add_option("--pthr", pthr, "threshold");
  res->add_option("--a", a, "logical failure prefactor");
  res->add_option("--ptarget", ptarget, "target logical failure");
  res->add_option("--depth", depth, "circuit depth");
  res->add_option("--k", k, "security exponent");
  res->add_flag("--no-k", no_k, "size m from the budget with r = --s rows");
  res->add_option("--s", s_rows, "input rows without k");
  res->add_option("--ntot", ntot, "','-separated N_tot values (default: preset grid)");
  res->add_option("-o,--output", common.output, "write the table here instead of stdout");
  std::string res_format = "csv";
  res->add_option("--format", res_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* au = app.add_subcommand("audit", "transcript leakage audit from a session config");
  au->add_option("--config", config, "session config (JSON)")->required();
  au->add_option("--max-tv", max_tv, "flag leakage at or above this distance");
  add_common(au, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rt) return cmd_roundtrip(common, scheme, m, circuit, plaintext);
    if (*sec) {
      std::string inputs;
      for (const auto& in : input_list) inputs += (inputs.empty() ? "" : ";") + in;
      return cmd_security(common, scheme, m, rows, inputs, samples);
    }
    if (*qec) return cmd_qec(common, code, plaintext, error);
    if (*tg) return cmd_tgate(common, variant, m, plaintext, trials, transcript_path);
    if (*cv) return cmd_cv(common, trials, tol);
    if (*res) {
      json params = json::object();
      if (!params_path.empty()) params = json::parse(read_file(params_path));
      if (fig5) params["fig5"] = true;
      if (p0) params["p0"] = *p0;
      if (pthr) params["p_threshold"] = *pthr;
      if (a) params["a_coeff"] = *a;
      if (ptarget) params["p_target"] = *ptarget;
      if (depth) params["depth"] = *depth;
      if (k) params["k"] = *k;
      if (no_k) params["k"] = nullptr;
      if (s_rows) params["s"] = *s_rows;
      common.format = res_format;
      return cmd_resources(common, params, ntot);
    }
    if (*au) return cmd_audit(common, config, max_tv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
