// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <set>
#include <thread>
#include <type_traits>

#include <json.hpp>

#include "qhelab/pauli_key.hpp"
#include "qhelab/perm_key.hpp"
#include "qhelab/scheme.hpp"

namespace qhe {

// ---------------------------------------------------------------- parties

const char* quantum_op_name(QuantumOp op) {
  switch (op) {
    case QuantumOp::Prepare: return "prepare";
    case QuantumOp::Measure: return "measure";
    case QuantumOp::Handoff: return "handoff";
    case QuantumOp::Decrypt: return "decrypt";
    case QuantumOp::Gate: return "gate";
  }
  return "?";
}

void PartyState::hold_key(const std::string& name, std::vector<int> bits) {
  if (role_ == Party::Server) throw ProtocolViolation("server may not hold key '" + name + "'");
  keys_[name] = std::move(bits);
}

const std::vector<int>& PartyState::key(const std::string& name) const {
  if (role_ == Party::Server) throw ProtocolViolation("server requested key '" + name + "'");
  const auto it = keys_.find(name);
  if (it == keys_.end()) throw std::out_of_range("no key named '" + name + "'");
  return it->second;
}

void PartyState::quantum(QuantumOp op) {
  if (role_ == Party::Client && op == QuantumOp::Gate) {
    throw ProtocolViolation("client exceeded its quantum ability: gate evaluation");
  }
  if (role_ == Party::Server && op == QuantumOp::Decrypt) throw ProtocolViolation("server attempted decryption");
  ++ops_[op];
}

std::size_t PartyState::quantum_ops(QuantumOp op) const {
  const auto it = ops_.find(op);
  return it == ops_.end() ? 0 : it->second;
}

void PartyState::take_register(const std::string& label) {
  if (owns(label)) throw ProtocolViolation("register '" + label + "' received twice");
  registers_.push_back(label);
}

void PartyState::give_register(const std::string& label) {
  const auto it = std::find(registers_.begin(), registers_.end(), label);
  if (it == registers_.end()) throw ProtocolViolation("hand-off of register '" + label + "' not owned");
  registers_.erase(it);
}

bool PartyState::owns(const std::string& label) const {
  return std::find(registers_.begin(), registers_.end(), label) != registers_.end();
}

void PartyState::remember(const std::string& label, std::vector<int> bits) { memory_[label] = std::move(bits); }

void PartyState::pop(const std::string& sub_protocol) {
  if (pending_.empty() || pending_.back() != sub_protocol) {
    throw ProtocolViolation("sub-protocol '" + sub_protocol + "' closed out of order");
  }
  pending_.pop_back();
}

SchemeKind parse_scheme_kind(const std::string& name) {
  if (name == "pauli") return SchemeKind::Pauli;
  if (name == "perm") return SchemeKind::Perm;
  throw std::invalid_argument("unknown scheme '" + name + "' (pauli or perm)");
}

const char* scheme_kind_name(SchemeKind kind) { return kind == SchemeKind::Pauli ? "pauli" : "perm"; }

// ---------------------------------------------------------------- plaintexts

namespace {

std::vector<std::string> plaintext_names(const std::string& spec) {
  std::vector<std::string> names;
  if (spec.find(',') != std::string::npos) {
    std::string cur;
    for (char c : spec + ",") {
      if (c == ',') {
        names.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur += c;
      }
    }
  } else {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if ((spec[i] == '+' || spec[i] == '-') && i + 1 < spec.size() && spec[i + 1] == 'i') {
        names.push_back(spec.substr(i++, 2));
      } else {
        names.emplace_back(1, spec[i]);
      }
    }
  }
  if (names.empty()) throw std::invalid_argument("empty plaintext spec");
  return names;
}

}  // namespace

DensityMatrix parse_plaintext(const std::string& spec) {
  const auto names = plaintext_names(spec);
  if (names.size() > kDenseMaxQubits) throw OracleCapExceeded(names.size());
  DensityMatrix out = DensityMatrix::named(names[0]);
  for (std::size_t i = 1; i < names.size(); ++i) out = out.tensor(DensityMatrix::named(names[i]));
  return out;
}

StabilizerState parse_stabilizer_plaintext(const std::string& spec) {
  const auto names = plaintext_names(spec);
  StabilizerState s = StabilizerState::zero_state(names.size());
  for (std::size_t q = 0; q < names.size(); ++q) {
    const auto& nm = names[q];
    GateList g;
    if (nm == "0") {
    } else if (nm == "1") {
      g = {{GateKind::X, q, 0}};
    } else if (nm == "+") {
      g = {{GateKind::H, q, 0}};
    } else if (nm == "-") {
      g = {{GateKind::X, q, 0}, {GateKind::H, q, 0}};
    } else if (nm == "+i") {
      g = {{GateKind::H, q, 0}, {GateKind::S, q, 0}};
    } else if (nm == "-i") {
      g = {{GateKind::X, q, 0}, {GateKind::H, q, 0}, {GateKind::S, q, 0}};
    } else {
      throw std::invalid_argument("'" + nm + "' is not a stabilizer state name");
    }
    s.apply_gates(g);
  }
  return s;
}

DensityMatrix plain_evaluation(const Circuit& circuit, const DensityMatrix& plain) {
  if (circuit.has_measurements()) throw std::invalid_argument("plain evaluation needs a measurement-free circuit");
  DensityMatrix out = plain;
  for (const auto& el : circuit.elements()) {
    if (const auto* g = std::get_if<Gate>(&el)) {
      out.apply_gate(*g);
    } else if (const auto* t = std::get_if<TMarker>(&el)) {
      out.apply_gate({GateKind::T, t->qubit, 0});
    }
  }
  return out;
}

// ---------------------------------------------------------------- sessions

namespace {

DensityMatrix as_density(const DensityMatrix& s) { return s; }
DensityMatrix as_density(const StabilizerState& s) {
  if (s.n_qubits() > kDenseMaxQubits) throw OracleCapExceeded(s.n_qubits());
  return to_density(s);
}

PauliString pauli_from_bits(const std::vector<int>& bits) {
  PauliString p(bits.size() / 2);
  for (std::size_t q = 0; q < p.size(); ++q) {
    p.set_x(q, bits[2 * q]);
    p.set_z(q, bits[2 * q + 1]);
  }
  return p;
}

void check_stabilizers(const SessionSpec& spec, std::size_t n) {
  for (const auto& k : spec.stabilizers) {
    if (k.size() != n) throw SizeMismatch("stabilizer size does not match the plaintext register");
    if (!k.is_hermitian()) throw std::invalid_argument("stabilizer must be Hermitian");
  }
}

struct Parties {
  PartyState client{Party::Client};
  PartyState server{Party::Server};
  Transcript transcript;

  void handoff(Party from, const std::string& label, std::size_t qubits) {
    PartyState& src = from == Party::Client ? client : server;
    PartyState& dst = from == Party::Client ? server : client;
    src.quantum(QuantumOp::Handoff);
    src.give_register(label);
    dst.take_register(label);
    transcript.handoff(from, label, qubits);
  }

  void classical(Party from, const std::string& label, std::vector<int> bits) {
    PartyState& dst = from == Party::Client ? server : client;
    dst.remember(label, bits);
    transcript.classical(from, label, std::move(bits));
  }
};

template <class State>
SessionResult run_pauli(const SessionSpec& spec, const State& plain, std::mt19937_64& rng) {
  constexpr bool dense = std::is_same_v<State, DensityMatrix>;
  const std::size_t n = plain.n_qubits();
  if (spec.circuit.n_qubits() > n) throw SizeMismatch("circuit larger than plaintext register");
  check_stabilizers(spec, n);

  Parties p;
  SessionResult res;

  // Client: sample and hold the key, encrypt in place.
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<int> kbits(2 * n);
  for (auto& b : kbits) b = bit(rng);
  p.client.hold_key("pauli", kbits);
  const PauliString key = pauli_from_bits(p.client.key("pauli"));
  PauliKeyDecoder client(key);
  p.client.quantum(QuantumOp::Prepare);
  State reg = plain;
  reg.apply_pauli(key);
  p.client.take_register("cipher");
  p.handoff(Party::Client, "cipher", n);

  // Canary: the key travels in clear and the server tracks its own frame.
  std::optional<PauliKeyDecoder> spy;
  if (spec.leak_key) {
    p.classical(Party::Client, "key", kbits);
    spy.emplace(pauli_from_bits(p.server.memory().at("key")));
  }

  for (const auto& el : spec.circuit.elements()) {
    if (const auto* g = std::get_if<Gate>(&el)) {
      p.server.quantum(QuantumOp::Gate);
      reg.apply_gate(*g);
      client.clifford(*g);
      if (spy) spy->clifford(*g);
    } else if (const auto* t = std::get_if<TMarker>(&el)) {
      if constexpr (!dense) {
        throw NotAllowed("T gates need the dense backend");
      } else {
        p.client.push("t-gate");
        const std::pair<int, int> mk{bit(rng), bit(rng)};
        p.client.quantum(QuantumOp::Prepare);
        p.client.take_register("magic");
        p.handoff(Party::Client, "magic", 1);
        p.server.quantum(QuantumOp::Gate);
        p.server.quantum(QuantumOp::Measure);
        const int o = inject_t_gate(reg, t->qubit, MagicStateResource::prepare(mk), rng);
        p.server.give_register("magic");
        p.classical(Party::Server, "t-outcome", {o});
        client.t_gate(t->qubit, mk, o);
        p.client.pop("t-gate");
      }
    } else if (const auto* m = std::get_if<MeasureMarker>(&el)) {
      p.server.quantum(QuantumOp::Measure);
      const auto rec = reg.measure_pauli(PauliString::single(n, m->qubit, 'Z'), rng, m->bit);
      if (spy) {
        p.classical(Party::Server, "measurement", {spy->measurement(m->qubit, rec.outcome)});
        res.bits[m->bit] = spy->measurement(m->qubit, rec.outcome);
      } else {
        p.classical(Party::Server, "measurement", {rec.outcome});
        res.bits[m->bit] = client.measurement(m->qubit, rec.outcome);
      }
    } else if (const auto* cp = std::get_if<ClassicalPauli>(&el)) {
      // Applied to the plaintext through the frame only.
      if (res.bits.at(cp->bit)) {
        const auto f = PauliString::single(n, cp->qubit, cp->pauli);
        client.multiply_frame(f);
        if (spy) spy->multiply_frame(f);
      }
    }
  }

  // Syndrome rounds: encrypted |+> ancilla, the client announces the Pauli
  // correction P_c of the ancilla, the server measures and reports.
  for (const auto& k : spec.stabilizers) {
    if (!client.is_pauli_frame()) throw NotAllowed("syndrome rounds after a T gate are not supported");
    p.client.push("syndrome");
    const PauliString ka = PauliString::parse(bit(rng) ? (bit(rng) ? "Y" : "X") : (bit(rng) ? "Z" : "I"));
    p.client.quantum(QuantumOp::Prepare);
    p.client.take_register("ancilla");
    p.handoff(Party::Client, "ancilla", 1);
    p.classical(Party::Client, "pauli-correction", {static_cast<int>(ka.z(0))});
    p.server.quantum(QuantumOp::Gate);
    p.server.quantum(QuantumOp::Measure);
    const auto rec = encrypted_stabilizer_measurement(reg, k, ka, rng);
    p.server.give_register("ancilla");
    const int reported = rec.raw ^ p.server.memory().at("pauli-correction").at(0) ^ (k.phase() == 2 ? 1 : 0);
    p.classical(Party::Server, "syndrome", {reported});
    res.syndrome.push_back(reported ^ static_cast<int>(!client.frame().commutes(k)));
    if (ka.x(0)) {
      client.multiply_frame(k.unsigned_copy());
      if (spy) spy->multiply_frame(k.unsigned_copy());
    }
    p.client.pop("syndrome");
  }

  p.handoff(Party::Server, "cipher", n);
  p.client.quantum(QuantumOp::Decrypt);
  if constexpr (dense) {
    reg.apply_gates(client.program());
  } else {
    reg.apply_pauli(client.frame());
  }
  res.output = as_density(reg);
  res.transcript = std::move(p.transcript);
  return res;
}

template <class State>
SessionResult run_perm(const SessionSpec& spec, const State& plain, std::mt19937_64& rng) {
  constexpr bool dense = std::is_same_v<State, DensityMatrix>;
  if (spec.leak_key) throw std::invalid_argument("the key-leak canary is defined for the Pauli scheme");
  const std::size_t n = plain.n_qubits();
  if (spec.circuit.n_qubits() > n) throw SizeMismatch("circuit larger than plaintext register");
  check_stabilizers(spec, n);

  Parties p;
  SessionResult res;

  const PermKey pk = PermKey::random(spec.m, rng);
  std::vector<int> kbits(pk.images().begin(), pk.images().end());
  p.client.hold_key("perm", kbits);
  std::vector<std::size_t> images;
  for (int v : p.client.key("perm")) images.push_back(static_cast<std::size_t>(v));

  p.client.quantum(QuantumOp::Prepare);
  SpreadRegister<State> reg(PermKey::from_images(images));
  const auto ids = reg.add_rows(plain, RowRole::Data);
  p.client.take_register("cipher");
  p.handoff(Party::Client, "cipher", n * 2 * spec.m);

  for (const auto& el : spec.circuit.elements()) {
    if (const auto* g = std::get_if<Gate>(&el)) {
      Gate row_gate = *g;
      row_gate.q0 = ids.at(g->q0);
      if (g->two_qubit()) row_gate.q1 = ids.at(g->q1);
      p.server.quantum(QuantumOp::Gate);
      reg.transversal(row_gate);
    } else if (const auto* t = std::get_if<TMarker>(&el)) {
      if constexpr (!dense) {
        throw NotAllowed("T gates need the dense backend");
      } else {
        // Magic row and the |0>, |1> pair are client preparations; the
        // sub-protocol logs its own messages.
        p.client.push("t-gate");
        for (int i = 0; i < 3; ++i) p.client.quantum(QuantumOp::Prepare);
        p.server.quantum(QuantumOp::Gate);
        p.server.quantum(QuantumOp::Measure);
        const auto out = t_gate_deterministic(reg, ids.at(t->qubit), rng, &p.transcript);
        p.server.remember("t-outcome", out.bits);
        p.server.remember("correction-row", {static_cast<int>(out.label.value())});
        p.client.remember("t-outcome", out.bits);
        p.client.pop("t-gate");
      }
    } else if (std::holds_alternative<MeasureMarker>(el) || std::holds_alternative<ClassicalPauli>(el)) {
      throw NotAllowed("permutation-key sessions do not support mid-circuit measurement");
    }
  }

  for (const auto& k : spec.stabilizers) {
    p.client.push("syndrome");
    p.client.quantum(QuantumOp::Prepare);
    p.server.quantum(QuantumOp::Gate);
    p.server.quantum(QuantumOp::Measure);
    res.syndrome.push_back(encrypted_syndrome_round(reg, ids, k, rng, &p.transcript));
    p.client.pop("syndrome");
  }

  p.handoff(Party::Server, "cipher", n * 2 * spec.m);
  p.client.quantum(QuantumOp::Decrypt);
  res.output = as_density(reg.decrypt(ids));
  res.transcript = std::move(p.transcript);
  return res;
}

template <class State>
SessionResult run_any(const SessionSpec& spec, const State& plain, std::mt19937_64& rng) {
  return spec.scheme == SchemeKind::Pauli ? run_pauli(spec, plain, rng) : run_perm(spec, plain, rng);
}

}  // namespace

SessionResult run_session(const SessionSpec& spec, const DensityMatrix& plain, std::mt19937_64& rng) {
  return run_any(spec, plain, rng);
}

SessionResult run_session(const SessionSpec& spec, const StabilizerState& plain, std::mt19937_64& rng) {
  return run_any(spec, plain, rng);
}

// ---------------------------------------------------------------- views

DensityMatrix averaged_server_view(const Circuit& circuit, const DensityMatrix& plain) {
  const std::size_t n = plain.n_qubits();
  if (n > 3) throw std::invalid_argument("averaged server view is limited to n <= 3");
  const auto gates = circuit.clifford_gates();
  const Key count = Key{1} << (2 * n);
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(plain.dim()), static_cast<Eigen::Index>(plain.dim()));
  for (Key k = 0; k < count; ++k) {
    DensityMatrix c = encrypt(PauliKeyScheme::key_to_pauli(n, k), plain);
    c.apply_gates(gates);
    acc += c.matrix();
  }
  return DensityMatrix(n, acc / static_cast<double>(count));
}

DensityMatrix simulated_server_view(std::size_t n) { return DensityMatrix::maximally_mixed(n); }

// ---------------------------------------------------------------- audit

std::mt19937_64 session_rng(std::uint64_t seed, std::uint64_t plaintext, std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(plaintext), hi(plaintext), lo(index), hi(index)};
  return std::mt19937_64(seq);
}

namespace {

std::string payload_key(const Message& m) {
  std::string s = m.label + ":";
  for (int b : m.bits) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace

LeakageReport audit_transcripts(const std::vector<std::vector<Transcript>>& by_plaintext, std::size_t min_samples) {
  if (by_plaintext.size() < 2) throw std::invalid_argument("audit needs at least two plaintexts");
  LeakageReport rep;
  rep.plaintexts = by_plaintext.size();
  rep.samples = by_plaintext[0].size();
  for (const auto& set : by_plaintext) {
    rep.samples = std::min(rep.samples, set.size());
    if (set.size() < min_samples) {
      throw InsufficientSamples("audit needs at least " + std::to_string(min_samples) + " sessions per plaintext, got " +
                                std::to_string(set.size()));
    }
  }

  // counts[p][slot][payload]
  std::vector<std::vector<std::map<std::string, std::size_t>>> counts(by_plaintext.size());
  std::vector<SlotLeakage> slots;
  for (std::size_t p = 0; p < by_plaintext.size(); ++p) {
    for (const auto& t : by_plaintext[p]) {
      std::size_t idx = 0;
      for (const auto& m : t.messages()) {
        if (m.kind != MessageKind::ClassicalBits) continue;
        if (idx >= slots.size()) {
          SlotLeakage s;
          s.index = idx;
          s.label = m.label;
          s.sender = m.sender;
          slots.push_back(s);
        }
        if (counts[p].size() <= idx) counts[p].resize(idx + 1);
        ++counts[p][idx][payload_key(m)];
        ++idx;
      }
    }
  }
  // Sessions with fewer classical messages count as "absent" in later slots.
  for (std::size_t p = 0; p < counts.size(); ++p) {
    counts[p].resize(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s) {
      std::size_t seen = 0;
      for (const auto& [k, c] : counts[p][s]) seen += c;
      if (seen < by_plaintext[p].size()) counts[p][s]["<absent>"] += by_plaintext[p].size() - seen;
    }
  }

  for (std::size_t s = 0; s < slots.size(); ++s) {
    std::set<std::string> support;
    for (const auto& c : counts) {
      for (const auto& [k, v] : c[s]) support.insert(k);
    }
    slots[s].support = support.size();
    for (std::size_t a = 0; a < counts.size(); ++a) {
      for (std::size_t b = a + 1; b < counts.size(); ++b) {
        const double na = static_cast<double>(by_plaintext[a].size());
        const double nb = static_cast<double>(by_plaintext[b].size());
        double tv = 0;
        for (const auto& k : support) {
          const auto ia = counts[a][s].find(k);
          const auto ib = counts[b][s].find(k);
          const double pa = ia == counts[a][s].end() ? 0 : static_cast<double>(ia->second) / na;
          const double pb = ib == counts[b][s].end() ? 0 : static_cast<double>(ib->second) / nb;
          tv += std::abs(pa - pb);
        }
        slots[s].tv = std::max(slots[s].tv, tv / 2);
      }
    }
    rep.max_tv = std::max(rep.max_tv, slots[s].tv);
  }
  rep.slots = std::move(slots);
  return rep;
}

LeakageReport audit_sessions(const SessionSpec& spec, const std::vector<DensityMatrix>& plaintexts,
                             std::size_t samples, std::uint64_t seed, unsigned jobs, std::size_t min_samples) {
  if (samples < min_samples) {
    throw InsufficientSamples("audit needs at least " + std::to_string(min_samples) + " sessions per plaintext, got " +
                              std::to_string(samples));
  }
  std::vector<std::vector<Transcript>> by_plaintext(plaintexts.size(), std::vector<Transcript>(samples));
  const std::size_t total = plaintexts.size() * samples;
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t j = w; j < total; j += workers) {
        const std::size_t p = j / samples, i = j % samples;
        auto rng = session_rng(seed, p, i);
        by_plaintext[p][i] = run_session(spec, plaintexts[p], rng).transcript;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return audit_transcripts(by_plaintext, min_samples);
}

std::string LeakageReport::to_json() const {
  nlohmann::json j{{"plaintexts", plaintexts}, {"samples", samples}, {"max_tv", max_tv}};
  j["slots"] = nlohmann::json::array();
  for (const auto& s : slots) {
    j["slots"].push_back({{"index", s.index},
                          {"label", s.label},
                          {"sender", party_name(s.sender)},
                          {"support", s.support},
                          {"tv", s.tv}});
  }
  return j.dump();
}

// ---------------------------------------------------------------- config

SessionConfig parse_session_config(const std::string& json_text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("session config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "session config must be a JSON object");
  SessionConfig cfg;
  try {
    cfg.spec.scheme = parse_scheme_kind(j.value("scheme", std::string("pauli")));
    cfg.spec.m = j.value("m", std::size_t{1});
    if (j.contains("circuit_text")) {
      cfg.spec.circuit = Circuit::parse(j.at("circuit_text").get<std::string>());
    } else if (j.contains("circuit")) {
      std::filesystem::path path = j.at("circuit").get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      cfg.spec.circuit = Circuit::load(path.string());
    } else {
      throw std::invalid_argument("session config needs 'circuit' or 'circuit_text'");
    }
    for (const auto& s : j.value("stabilizers", std::vector<std::string>{})) {
      cfg.spec.stabilizers.push_back(PauliString::parse(s));
    }
    cfg.spec.leak_key = j.value("leak_key", false);
    cfg.plaintexts = j.value("plaintexts", std::vector<std::string>{"0", "1"});
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.samples = j.value("samples", std::size_t{1000});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("session config: ") + e.what());
  }
  return cfg;
}

}  // namespace qhe
