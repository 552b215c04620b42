// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/qhelab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhelab/circuit.hpp"
#include "qhelab/cv.hpp"
#include "qhelab/density_matrix.hpp"
#include "qhelab/perm_key.hpp"
#include "qhelab/protocol.hpp"
#include "qhelab/resources.hpp"
#include "qhelab/scheme.hpp"
#include "qhelab/stabilizer_code.hpp"

struct qhe_circuit {
  qhe::Circuit circuit;
};

namespace {

using nlohmann::json;
using namespace qhe;

thread_local std::string g_last_error;

template <class F>
qhe_status guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return QHE_OK;
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return QHE_ERR_PARSE;
  } catch (const json::exception& e) {
    g_last_error = std::string("json: ") + e.what();
    return QHE_ERR_PARSE;
  } catch (const OracleCapExceeded& e) {
    g_last_error = e.what();
    return QHE_ERR_ORACLE_CAP;
  } catch (const ProtocolViolation& e) {
    g_last_error = e.what();
    return QHE_ERR_PROTOCOL;
  } catch (const Infeasible& e) {
    g_last_error = e.what();
    return QHE_ERR_INFEASIBLE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return QHE_ERR_INVALID;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return QHE_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QHE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QHE_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

json transcript_json(const Transcript& t) {
  json arr = json::array();
  const std::string text = t.to_jsonl();
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    arr.push_back(json::parse(text.substr(pos, end - pos)));
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return arr;
}

std::size_t plaintext_qubits(const std::string& spec) { return parse_plaintext(spec).n_qubits(); }

bool is_stabilizer_plaintext(const std::string& spec) {
  try {
    parse_stabilizer_plaintext(spec);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::size_t stabilizer_plaintext_qubits(const std::string& spec) { return parse_stabilizer_plaintext(spec).n_qubits(); }

}  // namespace

extern "C" {

const char* qhe_version(void) { return "0.1.0"; }

const char* qhe_last_error(void) { return g_last_error.c_str(); }

const char* qhe_status_name(qhe_status status) {
  switch (status) {
    case QHE_OK: return "ok";
    case QHE_ERR_PARSE: return "parse error";
    case QHE_ERR_INVALID: return "invalid argument";
    case QHE_ERR_ORACLE_CAP: return "oracle cap exceeded";
    case QHE_ERR_PROTOCOL: return "protocol violation";
    case QHE_ERR_INFEASIBLE: return "infeasible";
    case QHE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qhe_string_free(char* s) { std::free(s); }

qhe_status qhe_circuit_parse(const char* text, qhe_circuit** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = new qhe_circuit{Circuit::parse(text)};
  });
}

qhe_status qhe_circuit_load(const char* path, qhe_circuit** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new qhe_circuit{Circuit::load(path)};
  });
}

void qhe_circuit_free(qhe_circuit* c) { delete c; }

qhe_status qhe_circuit_serialize(const qhe_circuit* c, char** out) {
  return guard([&] {
    require(c, "circuit");
    require(out, "out");
    *out = dup(c->circuit.serialize());
  });
}

size_t qhe_circuit_qubits(const qhe_circuit* c) { return c ? c->circuit.n_qubits() : 0; }

size_t qhe_circuit_t_count(const qhe_circuit* c) { return c ? c->circuit.t_count() : 0; }

qhe_status qhe_roundtrip(const char* scheme, unsigned m, const qhe_circuit* circuit, const char* plaintext,
                         uint64_t seed, char** report) {
  return guard([&] {
    require(scheme, "scheme");
    require(circuit, "circuit");
    require(plaintext, "plaintext");
    require(report, "report");
    SessionSpec spec;
    spec.scheme = parse_scheme_kind(scheme);
    spec.m = spec.scheme == SchemeKind::Perm ? m : 1;
    spec.circuit = circuit->circuit;
    if (spec.circuit.has_measurements()) throw std::invalid_argument("roundtrip needs a measurement-free circuit");

    const bool stab = is_stabilizer_plaintext(plaintext);
    const std::size_t n = stab ? stabilizer_plaintext_qubits(plaintext) : plaintext_qubits(plaintext);
    const std::size_t cipher = spec.scheme == SchemeKind::Pauli ? n : n * 2 * spec.m;
    const bool tableau = stab && spec.circuit.t_count() == 0 && cipher > kDenseMaxQubits;

    auto rng = session_rng(seed, 0, 0);
    SessionResult res;
    DensityMatrix plain;
    if (tableau) {
      const auto s = parse_stabilizer_plaintext(plaintext);
      plain = to_density(s);
      res = run_session(spec, s, rng);
    } else {
      plain = parse_plaintext(plaintext);
      res = run_session(spec, plain, rng);
    }
    const double dist = trace_distance(res.output, plain_evaluation(spec.circuit, plain));
    json j{{"scheme", scheme_kind_name(spec.scheme)},
           {"plaintext", plaintext},
           {"qubits", n},
           {"cipher_qubits", cipher},
           {"backend", tableau ? "tableau" : "dense"},
           {"seed", seed},
           {"distance", dist},
           {"pass", dist < 1e-8},
           {"transcript", transcript_json(res.transcript)}};
    if (spec.scheme == SchemeKind::Perm) j["m"] = spec.m;
    *report = dup(j.dump());
  });
}

qhe_status qhe_security(const char* scheme, unsigned m, unsigned rows, const char* inputs, size_t samples,
                        uint64_t seed, unsigned jobs, char** report) {
  return guard([&] {
    require(scheme, "scheme");
    require(inputs, "inputs");
    require(report, "report");
    std::vector<DensityMatrix> states;
    for (const auto& s : split(inputs, ';')) states.push_back(parse_plaintext(s));
    if (states.size() < 2) throw std::invalid_argument("security needs at least two inputs");
    const std::size_t n = states.front().n_qubits();
    for (const auto& s : states) {
      if (s.n_qubits() != n) throw std::invalid_argument("inputs differ in qubit count");
    }
    const std::string name = scheme;
    std::unique_ptr<Scheme> sch;
    if (name == "pauli") {
      sch = std::make_unique<PauliKeyScheme>(n);
    } else if (name == "phase") {
      sch = std::make_unique<PhaseKeyScheme>(n);
    } else if (name == "perm") {
      if (rows == 0) rows = static_cast<unsigned>(n);
      if (rows != n) throw std::invalid_argument("perm rows must match the input qubit count");
      if (std::size_t{rows} * 2 * m > kDenseMaxQubits) throw OracleCapExceeded(std::size_t{rows} * 2 * m);
      sch = std::make_unique<PermutationKeyScheme>(m, rows);
    } else {
      throw std::invalid_argument("unknown scheme '" + name + "' (pauli, phase or perm)");
    }
    const auto rep = security_delta(*sch, states, jobs, samples ? samples : 4096, seed);
    json j = json::parse(rep.to_json());
    j["scheme"] = name;
    j["inputs"] = inputs;
    if (name == "perm") {
      const std::size_t r = rows - 1;
      const double bound = security_bound(r, m);
      j["m"] = m;
      j["r"] = r;
      j["bound"] = bound;
      j["within_bound"] = rep.delta <= bound + 1e-12;
    }
    *report = dup(j.dump());
  });
}

qhe_status qhe_qec_demo(const char* code, const char* plaintext, const char* error, uint64_t seed, char** report) {
  return guard([&] {
    require(code, "code");
    require(plaintext, "plaintext");
    require(error, "error");
    require(report, "report");
    const std::string code_text = code;
    const StabilizerCode c = code_text.find('\n') == std::string::npos ? StabilizerCode::named(code_text)
                                                                       : StabilizerCode::parse(code_text);
    const auto scheme = compose_with_stabilizer_code(std::make_shared<PauliKeyScheme>(c.k), c);

    std::vector<PauliString> errors;
    if (std::string(error) == "all") {
      errors.emplace_back(c.n);
      for (std::size_t q = 0; q < c.n; ++q) {
        for (char letter : c.corrects) errors.push_back(PauliString::single(c.n, q, letter));
      }
    } else {
      errors.push_back(PauliString::parse(error));
      if (errors.back().size() != c.n) throw std::invalid_argument("error length does not match the code");
    }

    std::mt19937_64 rng(seed);
    const Key key = std::uniform_int_distribution<Key>(0, scheme->key_count() - 1)(rng);
    const bool stab = is_stabilizer_plaintext(plaintext);
    json runs = json::array();
    bool all = true;
    for (const auto& e : errors) {
      double dist = 0;
      Syndrome syn;
      PauliString corr;
      if (stab) {
        const auto plain = parse_stabilizer_plaintext(plaintext);
        const auto run = run_encrypted_qec(*scheme, c, key, plain, e, rng);
        dist = trace_distance(to_density(run.output), to_density(plain));
        syn = run.syndrome;
        corr = run.correction;
      } else {
        const auto plain = parse_plaintext(plaintext);
        const auto run = run_encrypted_qec(*scheme, c, key, plain, e, rng);
        dist = trace_distance(run.output, plain);
        syn = run.syndrome;
        corr = run.correction;
      }
      const bool ok = dist < 1e-10;
      all = all && ok;
      runs.push_back({{"error", e.str()}, {"syndrome", syn}, {"correction", corr.str()}, {"distance", dist},
                      {"recovered", ok}});
    }
    json j{{"code", c.name}, {"n", c.n},  {"k", c.k},       {"key", key},
           {"seed", seed},   {"runs", runs}, {"all_recovered", all}};
    j["d"] = c.d ? json(*c.d) : json(nullptr);
    *report = dup(j.dump());
  });
}

qhe_status qhe_t_gate(const char* variant, unsigned m, const char* plaintext, size_t trials, uint64_t seed,
                      char** report) {
  return guard([&] {
    require(variant, "variant");
    require(plaintext, "plaintext");
    require(report, "report");
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const std::string v = variant;
    const DensityMatrix plain = parse_plaintext(plaintext);
    if (plain.n_qubits() != 1) throw std::invalid_argument("t-gate demo takes a one-qubit plaintext");
    DensityMatrix target = plain;
    target.apply_gate({GateKind::T, 0, 0});
    DensityMatrix target_dg = plain;
    target_dg.apply_gate({GateKind::TDG, 0, 0});

    json j{{"variant", v}, {"plaintext", plaintext}, {"trials", trials}, {"seed", seed}};
    double max_dist = 0;
    std::size_t successes = 0;
    Transcript first;
    if (v == "deterministic" || v == "pauli") {
      SessionSpec spec;
      spec.scheme = v == "pauli" ? SchemeKind::Pauli : SchemeKind::Perm;
      spec.m = m;
      spec.circuit = Circuit::parse("T 0\n");
      for (std::size_t i = 0; i < trials; ++i) {
        auto rng = session_rng(seed, 0, i);
        auto res = run_session(spec, plain, rng);
        const double d = trace_distance(res.output, target);
        max_dist = std::max(max_dist, d);
        if (d < 1e-10) ++successes;
        if (i == 0) first = std::move(res.transcript);
      }
      if (spec.scheme == SchemeKind::Perm) j["m"] = m;
    } else if (v == "probabilistic") {
      for (std::size_t i = 0; i < trials; ++i) {
        auto rng = session_rng(seed, 0, i);
        SpreadRegister<DensityMatrix> reg(PermKey::random(m, rng));
        const auto id = reg.add_rows(plain, RowRole::Data).front();
        Transcript t;
        t.handoff(Party::Client, "cipher", 2 * m);
        const auto out = t_gate_probabilistic(reg, id, rng, &t);
        t.handoff(Party::Server, "cipher", 2 * m);
        const double d = trace_distance(reg.decrypt({id}), out.success ? target : target_dg);
        max_dist = std::max(max_dist, d);
        if (out.success) ++successes;
        if (i == 0) first = std::move(t);
      }
      j["m"] = m;
    } else {
      throw std::invalid_argument("unknown T-gate variant '" + v + "' (deterministic, probabilistic or pauli)");
    }
    j["successes"] = successes;
    j["success_rate"] = static_cast<double>(successes) / static_cast<double>(trials);
    // Probabilistic runs are compared with T or T^dagger as announced.
    j["max_distance"] = max_dist;
    j["pass"] = max_dist < 1e-10;
    j["transcript"] = transcript_json(first);
    *report = dup(j.dump());
  });
}

qhe_status qhe_cv_check(size_t trials, uint64_t seed, double tol, char** report) {
  return guard([&] {
    require(report, "report");
    *report = dup(cv::cv_identity_suite(trials, seed, tol).to_json());
  });
}

qhe_status qhe_resources(const char* params, const char* grid, const char* format, char** table) {
  return guard([&] {
    require(format, "format");
    require(table, "table");
    const json j = json::parse(params && *params ? params : "{}");
    if (!j.is_object()) throw ParseError(0, "resource params must be a JSON object");
    ResourceParams p = j.value("fig5", false) ? fig5_params() : ResourceParams{};
    p.p0 = j.value("p0", p.p0);
    p.p_threshold = j.value("p_threshold", p.p_threshold);
    p.a_coeff = j.value("a_coeff", p.a_coeff);
    p.p_target = j.value("p_target", p.p_target);
    p.depth = j.value("depth", p.depth);
    p.s = j.value("s", p.s);
    if (j.contains("k")) {
      if (j["k"].is_null()) {
        p.k.reset();
      } else {
        p.k = j["k"].get<unsigned>();
      }
    }
    std::vector<BigInt> points;
    if (grid && *grid) {
      for (const auto& s : split(grid, ',')) points.push_back(parse_count(s));
    } else {
      points = fig5_grid();
    }
    p.n_total = points.front();
    const auto rows = tradeoff_sweep(p, points);
    const std::string fmt = format;
    if (fmt == "csv") {
      *table = dup(sweep_csv(rows));
    } else if (fmt == "json") {
      *table = dup(sweep_json(rows));
    } else {
      throw std::invalid_argument("format must be json or csv");
    }
  });
}

qhe_status qhe_audit(const char* config, const char* base_dir, unsigned jobs, char** report) {
  return guard([&] {
    require(config, "config");
    require(report, "report");
    const auto cfg = parse_session_config(config, base_dir ? base_dir : ".");
    std::vector<DensityMatrix> plains;
    for (const auto& s : cfg.plaintexts) plains.push_back(parse_plaintext(s));
    const auto rep = audit_sessions(cfg.spec, plains, cfg.samples, cfg.seed, jobs);
    json j = json::parse(rep.to_json());
    j["scheme"] = scheme_kind_name(cfg.spec.scheme);
    j["leak_key"] = cfg.spec.leak_key;
    j["seed"] = cfg.seed;
    *report = dup(j.dump());
  });
}

}  // extern "C"
