// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qhelab/circuit.hpp"
#include "qhelab/clifford.hpp"
#include "qhelab/density_matrix.hpp"
#include "qhelab/pauli.hpp"

namespace qhe {

/// Possibly mixed stabilizer state: k <= n independent commuting Hermitian
/// generators. Missing generators mean maximally mixed degrees of freedom.
class StabilizerState {
 public:
  StabilizerState() = default;

  static StabilizerState zero_state(std::size_t n);
  static StabilizerState maximally_mixed(std::size_t n);
  /// Validates commutation, Hermiticity and independence.
  static StabilizerState from_generators(std::size_t n, std::vector<PauliString> gens);

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliString>& generators() const { return gens_; }

  void apply_gate(const Gate& g);
  void apply_gates(const std::vector<Gate>& gates);
  void apply_clifford(const CliffordOp& c);
  void apply_pauli(const PauliString& p);

  /// Measures a Hermitian Pauli. If `forced` is set the outcome is fixed and
  /// the returned probability is that of the forced outcome; forcing a
  /// zero-probability outcome throws ZeroProbabilityOutcome.
  MeasurementRecord measure_pauli(const PauliString& p, std::mt19937_64& rng, std::string label = {},
                                  std::optional<int> forced = std::nullopt);

  /// +1 or -1 if +-p is in the stabilizer group, nullopt otherwise.
  std::optional<int> eigenvalue(const PauliString& p) const;

  /// this (x) other.
  StabilizerState tensor(const StabilizerState& other) const;
  /// Partial trace keeping `keep` (in the given order).
  StabilizerState reduced(const std::vector<std::size_t>& keep) const;

  /// Generators in reduced row-echelon form; equal groups give equal output.
  std::vector<PauliString> canonical_generators() const;
  bool same_state(const StabilizerState& other) const;

  DensityMatrix to_density() const;
  std::string to_json() const;

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> gens_;
};

DensityMatrix to_density(const StabilizerState& s);

}  // namespace qhe
