// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include <json.hpp>

#include "oracle.hpp"
#include "qhelab/perm_key.hpp"
#include "qhelab/protocol.hpp"

using namespace qhe;

namespace {

SessionSpec pauli_spec(const std::string& circuit) {
  SessionSpec s;
  s.circuit = Circuit::parse(circuit);
  return s;
}

SessionSpec perm_spec(const std::string& circuit, std::size_t m) {
  SessionSpec s;
  s.scheme = SchemeKind::Perm;
  s.m = m;
  s.circuit = Circuit::parse(circuit);
  return s;
}

// Independent reference: circuit unitary (T included) applied to rho.
oracle::Mat oracle_output(const Circuit& c, const oracle::Mat& rho) {
  GateList gates;
  for (const auto& el : c.elements()) {
    if (const auto* g = std::get_if<Gate>(&el)) gates.push_back(*g);
    if (const auto* t = std::get_if<TMarker>(&el)) gates.push_back({GateKind::T, t->qubit, 0});
  }
  const std::size_t n = static_cast<std::size_t>(std::log2(rho.rows()));
  const oracle::Mat u = oracle::unitary(n, gates);
  return u * rho * u.adjoint();
}

std::vector<const Message*> classical(const Transcript& t) {
  std::vector<const Message*> out;
  for (const auto& m : t.messages()) {
    if (m.kind == MessageKind::ClassicalBits) out.push_back(&m);
  }
  return out;
}

}  // namespace

TEST_CASE("party roles") {
  PartyState client(Party::Client), server(Party::Server);
  client.hold_key("k", {1, 0});
  CHECK(client.key("k") == std::vector<int>{1, 0});
  CHECK_THROWS_AS(server.hold_key("k", {1}), ProtocolViolation);
  CHECK_THROWS_AS(server.key("k"), ProtocolViolation);
  CHECK_FALSE(server.holds_keys());

  for (auto op : {QuantumOp::Prepare, QuantumOp::Measure, QuantumOp::Handoff, QuantumOp::Decrypt}) client.quantum(op);
  CHECK_THROWS_AS(client.quantum(QuantumOp::Gate), ProtocolViolation);
  server.quantum(QuantumOp::Gate);
  CHECK_THROWS_AS(server.quantum(QuantumOp::Decrypt), ProtocolViolation);
  CHECK(server.quantum_ops(QuantumOp::Gate) == 1);

  client.take_register("r");
  CHECK_THROWS_AS(client.take_register("r"), ProtocolViolation);
  client.give_register("r");
  CHECK_THROWS_AS(client.give_register("r"), ProtocolViolation);

  client.push("a");
  client.push("b");
  CHECK_THROWS_AS(client.pop("a"), ProtocolViolation);
  client.pop("b");
  client.pop("a");
  CHECK(client.pending().empty());
}

TEST_CASE("pauli session: H on |0>") {
  std::mt19937_64 rng(1);
  const auto res = run_session(pauli_spec("H 0\n"), parse_plaintext("0"), rng);
  CHECK(trace_distance(res.output, DensityMatrix::named("+")) < 1e-12);
  CHECK(res.transcript.count(MessageKind::QuantumHandoff) == 2);
  CHECK(res.transcript.count(MessageKind::ClassicalBits) == 0);
  const auto& m = res.transcript.messages();
  CHECK(m.front().sender == Party::Client);
  CHECK(m.back().sender == Party::Server);
}

TEST_CASE("pauli sessions match plain evaluation") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    auto c = random_clifford_circuit(n, 15, rng);
    if (trial % 4 == 0) c.add_t(0);
    std::string spec;
    const char* names[] = {"0", "1", "+", "-", "+i", "T"};
    for (std::size_t q = 0; q < n; ++q) spec += std::string(q ? "," : "") + names[rng() % 6];
    const auto plain = parse_plaintext(spec);
    const auto res = run_session(pauli_spec(c.serialize()), plain, rng);
    CHECK(oracle::trace_distance(res.output.matrix(), oracle_output(c, plain.matrix())) < 1e-10);
    CHECK(trace_distance(res.output, plain_evaluation(c, plain)) < 1e-10);
  }
}

TEST_CASE("pauli session with measurement and classical Pauli") {
  std::mt19937_64 rng(3);
  // Teleport-like: measure 0 and copy the outcome onto qubit 1.
  const auto spec = pauli_spec("H 0\nM 0 -> b\nCPAULI b X 1\n");
  int ones = 0;
  for (int i = 0; i < 200; ++i) {
    const auto res = run_session(spec, parse_plaintext("00"), rng);
    const int b = res.bits.at("b");
    ones += b;
    CHECK(res.output.expectation(PauliString::parse("IZ")) == doctest::Approx(b ? -1.0 : 1.0));
    CHECK(res.output.expectation(PauliString::parse("ZI")) == doctest::Approx(b ? -1.0 : 1.0));
  }
  CHECK(ones > 60);
  CHECK(ones < 140);
}

TEST_CASE("tableau sessions") {
  std::mt19937_64 rng(11);
  const auto c = Circuit::parse("H 0\nCNOT 0 1\nS 1\n");
  const auto res = run_session(pauli_spec(c.serialize()), parse_stabilizer_plaintext("0+"), rng);
  CHECK(trace_distance(res.output, plain_evaluation(c, parse_plaintext("0+"))) < 1e-12);

  const auto t = run_session(perm_spec("H 0\n", 5), parse_stabilizer_plaintext("0"), rng);
  CHECK(trace_distance(t.output, DensityMatrix::named("+")) < 1e-12);
  CHECK(t.transcript.messages().front().qubits == 10);

  CHECK_THROWS_AS(run_session(pauli_spec("T 0\n"), parse_stabilizer_plaintext("+"), rng), NotAllowed);
  CHECK_THROWS_AS(parse_stabilizer_plaintext("T"), std::invalid_argument);
}

TEST_CASE("perm session with a deterministic T") {
  std::mt19937_64 rng(5);
  const auto spec = perm_spec("T 0\n", 1);
  const auto res = run_session(spec, parse_plaintext("+"), rng);
  CHECK(trace_distance(res.output, DensityMatrix::named("T")) < 1e-10);

  const auto msgs = classical(res.transcript);
  REQUIRE(msgs.size() == 2);
  CHECK(msgs[0]->sender == Party::Server);
  CHECK(msgs[0]->bits.size() == 2 * spec.m);
  CHECK(msgs[1]->sender == Party::Client);
  CHECK(msgs[1]->label == "correction-row");
  CHECK(msgs[1]->bits.size() == 1);

  CHECK_THROWS_AS(run_session(perm_spec("M 0 -> b\n", 1), parse_plaintext("0"), rng), NotAllowed);
  CHECK_THROWS_AS(run_session(perm_spec("H 0\n", 2), parse_stabilizer_plaintext("0"), rng), NotAllowed);
}

TEST_CASE("syndrome round carries the Pauli correction") {
  std::mt19937_64 rng(9);
  SessionSpec spec = pauli_spec("CNOT 0 1\nCNOT 0 2\nX 1\n");
  spec.stabilizers = {PauliString::parse("ZZI"), PauliString::parse("IZZ")};
  for (const char* in : {"0", "1", "+"}) {
    for (int i = 0; i < 30; ++i) {
      const auto plain = parse_plaintext(std::string(in) + ",0,0");
      const auto res = run_session(spec, plain, rng);
      // X on qubit 1 flips both checks.
      CHECK(res.syndrome == std::vector<int>{1, 1});
      CHECK(trace_distance(res.output, plain_evaluation(spec.circuit, plain)) < 1e-10);
      const auto msgs = classical(res.transcript);
      REQUIRE(msgs.size() == 4);
      CHECK(msgs[0]->label == "pauli-correction");
      CHECK(msgs[0]->sender == Party::Client);
      CHECK(msgs[1]->label == "syndrome");
      CHECK(msgs[1]->sender == Party::Server);
    }
  }

  SessionSpec perm = perm_spec("CNOT 0 1\nX 0\n", 1);
  perm.stabilizers = {PauliString::parse("ZZ")};
  const auto res = run_session(perm, parse_plaintext("00"), rng);
  CHECK(res.syndrome == std::vector<int>{1});
}

TEST_CASE("server view is key-independent") {
  std::mt19937_64 rng(13);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto c = random_clifford_circuit(n, 12, rng);
      std::string spec;
      for (std::size_t q = 0; q < n; ++q) spec += "01+-"[rng() % 4];
      const auto view = averaged_server_view(c, parse_plaintext(spec));
      CHECK(oracle::max_abs(view.matrix() - simulated_server_view(n).matrix()) < 1e-12);
    }
  }
  CHECK_THROWS(averaged_server_view(Circuit::parse("T 0\n"), parse_plaintext("0")));
}

TEST_CASE("transcripts are deterministic under a seed") {
  SessionSpec spec = perm_spec("H 0\nT 0\n", 1);
  auto a = session_rng(4, 0, 17), b = session_rng(4, 0, 17), c = session_rng(4, 1, 17);
  const auto ta = run_session(spec, parse_plaintext("0"), a).transcript;
  const auto tb = run_session(spec, parse_plaintext("0"), b).transcript;
  CHECK(ta == tb);
  CHECK(ta.to_jsonl() == tb.to_jsonl());
  CHECK(Transcript::from_jsonl(ta.to_jsonl()) == ta);

  std::mt19937_64 x = session_rng(4, 0, 17), y = c;
  CHECK(x() != y());
}

TEST_CASE("audit: honest protocols") {
  const std::vector<DensityMatrix> pair{parse_plaintext("0"), parse_plaintext("1")};

  const auto clifford = audit_sessions(pauli_spec("H 0\nS 0\n"), pair, 1000, 1, 4);
  CHECK(clifford.slots.empty());
  CHECK(clifford.max_tv == 0);

  const auto measured = audit_sessions(pauli_spec("M 0 -> b\n"), pair, 1000, 2, 4);
  REQUIRE(measured.slots.size() == 1);
  CHECK(measured.max_tv < 0.05);

  const auto t = audit_sessions(perm_spec("T 0\n", 1), pair, 1000, 3, 4);
  REQUIRE(t.slots.size() == 2);
  CHECK(t.slots[1].label == "correction-row");
  CHECK(t.slots[1].tv < 0.05);
  CHECK(t.max_tv < 0.05);

  const auto j = nlohmann::json::parse(t.to_json());
  CHECK(j["samples"] == 1000);
  CHECK(j["slots"].size() == 2);
}

TEST_CASE("audit: key-leaking canary is flagged") {
  SessionSpec spec = pauli_spec("M 0 -> b\n");
  spec.leak_key = true;
  const auto rep = audit_sessions(spec, {parse_plaintext("0"), parse_plaintext("1")}, 1000, 5, 4);
  CHECK(rep.max_tv > 0.99);

  std::mt19937_64 rng(1);
  const auto res = run_session(spec, parse_plaintext("1"), rng);
  CHECK(res.bits.at("b") == 1);
}

TEST_CASE("audit errors") {
  const std::vector<DensityMatrix> pair{parse_plaintext("0"), parse_plaintext("1")};
  CHECK_THROWS_AS(audit_sessions(pauli_spec("H 0\n"), pair, 999, 1), InsufficientSamples);
  std::vector<std::vector<Transcript>> short_sets(2, std::vector<Transcript>(10));
  CHECK_THROWS_AS(audit_transcripts(short_sets), InsufficientSamples);
  CHECK_NOTHROW(audit_transcripts(short_sets, 10));

  // Thread count does not change the result.
  const auto one = audit_sessions(pauli_spec("H 0\nT 0\n"), pair, 1000, 8, 1);
  const auto many = audit_sessions(pauli_spec("H 0\nT 0\n"), pair, 1000, 8, 6);
  CHECK(one.max_tv < 0.05);
  CHECK(one.to_json() == many.to_json());
}

TEST_CASE("session config") {
  const auto cfg = parse_session_config(
      R"({"scheme": "perm", "m": 1, "circuit_text": "T 0\n", "plaintexts": ["0", "1"], "seed": 3, "samples": 1500})");
  CHECK(cfg.spec.scheme == SchemeKind::Perm);
  CHECK(cfg.spec.circuit.t_count() == 1);
  CHECK(cfg.plaintexts.size() == 2);
  CHECK(cfg.seed == 3);
  CHECK(cfg.samples == 1500);
  CHECK_THROWS_AS(parse_session_config("{"), ParseError);
  CHECK_THROWS_AS(parse_session_config(R"({"scheme": "rsa", "circuit_text": ""})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_session_config(R"({"scheme": "pauli"})"), std::invalid_argument);
}
