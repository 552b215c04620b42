// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qhe {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Elementary gates. The Clifford set is {H, S, CNOT, CZ, SWAP, X, Y, Z};
/// T and TDG only occur in circuits and client-side decryption programs.
enum class GateKind { H, S, CNOT, CZ, SWAP, X, Y, Z, T, TDG };

struct Gate {
  GateKind kind;
  std::size_t q0 = 0;
  std::size_t q1 = 0;  // second operand for two-qubit gates

  bool two_qubit() const {
    return kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::SWAP;
  }
  bool clifford() const { return kind != GateKind::T && kind != GateKind::TDG; }
  /// Diagonal in the computational basis.
  bool diagonal() const {
    return kind == GateKind::S || kind == GateKind::CZ || kind == GateKind::Z ||
           kind == GateKind::T || kind == GateKind::TDG;
  }
  friend bool operator==(const Gate&, const Gate&) = default;
};

const char* gate_name(GateKind kind);
/// Inverse written in the elementary set (S becomes three S gates).
std::vector<Gate> inverse_gates(const std::vector<Gate>& gates);

struct TMarker {
  std::size_t qubit;
  friend bool operator==(const TMarker&, const TMarker&) = default;
};

struct MeasureMarker {
  std::size_t qubit;
  std::string bit;
  friend bool operator==(const MeasureMarker&, const MeasureMarker&) = default;
};

/// Pauli applied to `qubit` when classical bit `bit` is 1.
struct ClassicalPauli {
  std::string bit;
  char pauli;
  std::size_t qubit;
  friend bool operator==(const ClassicalPauli&, const ClassicalPauli&) = default;
};

struct Comment {
  std::string text;  // full line including the leading '#'
  friend bool operator==(const Comment&, const Comment&) = default;
};

using CircuitElement = std::variant<Gate, TMarker, MeasureMarker, ClassicalPauli, Comment>;

/// Ordered list of circuit elements on a fixed register.
///
/// Text format, one element per line:
///   H 0 | S 0 | X 0 | Y 0 | Z 0 | CNOT 0 1 | CZ 0 1 | SWAP 0 1
///   T 0
///   M 0 -> b0
///   CPAULI b0 X 1
///   # comment
/// An optional first line `QUBITS n` fixes the register size; otherwise it is
/// one more than the largest index used. Comment lines are kept so that
/// serialize(parse(text)) reproduces canonical text byte for byte.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_(n_qubits), explicit_size_(true) {}

  static Circuit parse(std::string_view text);
  static Circuit load(const std::string& path);
  std::string serialize() const;

  std::size_t n_qubits() const { return n_; }
  const std::vector<CircuitElement>& elements() const { return elements_; }

  void add_gate(GateKind kind, std::size_t q0, std::size_t q1 = 0);
  void add_t(std::size_t qubit);
  void add_measure(std::size_t qubit, std::string bit);
  void add_classical_pauli(std::string bit, char pauli, std::size_t qubit);
  void add_comment(std::string text);

  bool clifford_only() const;
  bool has_measurements() const;
  std::size_t t_count() const;
  /// The Clifford gates in order; throws if anything else is present.
  std::vector<Gate> clifford_gates() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void check_qubit(std::size_t q) const;

  std::size_t n_ = 0;
  bool explicit_size_ = false;
  std::vector<CircuitElement> elements_;
};

/// Random Clifford-gate circuit, used by tests and demos.
template <class Rng>
Circuit random_clifford_circuit(std::size_t n, std::size_t depth, Rng& rng);

}  // namespace qhe

#include "qhelab/detail/circuit_random.inl"
