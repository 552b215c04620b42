// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "qhelab/circuit.hpp"

using qhe::Circuit;
using qhe::GateKind;

TEST_CASE("circuit round trip is byte exact") {
  const std::string text =
      "QUBITS 3\n"
      "# prepare\n"
      "H 0\n"
      "CNOT 0 1\n"
      "T 2\n"
      "M 1 -> b0\n"
      "CPAULI b0 X 2\n"
      "SWAP 2 0\n";
  const auto c = Circuit::parse(text);
  CHECK(c.serialize() == text);
  CHECK(c.n_qubits() == 3);
  CHECK(c.t_count() == 1);
  CHECK(c.has_measurements());
  CHECK_FALSE(c.clifford_only());
}

TEST_CASE("circuit size inferred without header") {
  const auto c = Circuit::parse("H 0\nCZ 0 4\n");
  CHECK(c.n_qubits() == 5);
  CHECK(c.serialize() == "H 0\nCZ 0 4\n");
  CHECK(Circuit::parse(c.serialize()) == c);
}

TEST_CASE("circuit parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      Circuit::parse(text);
    } catch (const qhe::ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("H 0\nFOO 1\n") == 2);
  CHECK(line_of("CNOT 0\n") == 1);
  CHECK(line_of("M 0 -> a\nM 1 -> a\n") == 2);
  CHECK(line_of("CPAULI z X 0\n") == 1);
  CHECK(line_of("H 0\nQUBITS 2\n") == 2);
  CHECK(line_of("CNOT 1 1\n") == 1);
  CHECK_THROWS_AS(Circuit::parse("QUBITS 2\nH 5\n"), qhe::ParseError);
}

TEST_CASE("random circuits round trip") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = qhe::random_clifford_circuit(1 + rng() % 6, 20, rng);
    CHECK(Circuit::parse(c.serialize()) == c);
  }
}

TEST_CASE("builder range checks") {
  Circuit c(2);
  c.add_gate(GateKind::CNOT, 0, 1);
  CHECK_THROWS(c.add_gate(GateKind::H, 2));
  CHECK_THROWS(c.add_gate(GateKind::CZ, 1, 1));
  c.add_measure(0, "m");
  CHECK_THROWS(c.add_measure(1, "m"));
  CHECK(qhe::inverse_gates({{GateKind::S, 0, 0}, {GateKind::T, 1, 0}}).size() == 4);
}
