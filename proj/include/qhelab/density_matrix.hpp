// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qhelab/circuit.hpp"
#include "qhelab/clifford.hpp"
#include "qhelab/pauli.hpp"

namespace qhe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest register the dense oracle accepts (dimension 256).
inline constexpr std::size_t kDenseMaxQubits = 8;

class OracleCapExceeded : public std::invalid_argument {
 public:
  explicit OracleCapExceeded(std::size_t n)
      : std::invalid_argument("oracle cap exceeded: " + std::to_string(n) + " qubits > " +
                              std::to_string(kDenseMaxQubits)) {}
};

class ZeroProbabilityOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome of a Pauli or computational-basis measurement. Bit 0 is the +1
/// eigenvalue.
struct MeasurementRecord {
  std::string label;
  int outcome = 0;
  double probability = 1.0;
};

/// Exact density matrix on at most kDenseMaxQubits qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so the matrix of
/// A (x) B places A on qubit 0.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(std::size_t n_qubits, Matrix rho);

  static DensityMatrix zero_state(std::size_t n);
  static DensityMatrix maximally_mixed(std::size_t n);
  static DensityMatrix basis_state(std::size_t n, std::uint64_t index);
  static DensityMatrix pure(std::size_t n, const Vector& psi);
  /// Single-qubit states by name: 0, 1, +, -, +i, -i, T (= T|+>).
  static DensityMatrix named(const std::string& name);

  std::size_t n_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

  void apply_gate(const Gate& g);
  void apply_gates(const std::vector<Gate>& gates);
  void apply_clifford(const CliffordOp& c);
  /// rho <- P rho P^dagger (the phase of P cancels).
  void apply_pauli(const PauliString& p);
  void apply_unitary(const Matrix& u);

  /// Projects onto the requested eigenspace of a Hermitian Pauli and
  /// renormalises. Returns the probability of that outcome.
  double project_pauli(const PauliString& p, int outcome);
  MeasurementRecord measure_pauli(const PauliString& p, std::mt19937_64& rng, std::string label = {});
  /// <P> for a Hermitian Pauli.
  double expectation(const PauliString& p) const;

  DensityMatrix tensor(const DensityMatrix& other) const;
  /// Partial trace keeping `keep` (in the given order).
  DensityMatrix reduced(const std::vector<std::size_t>& keep) const;
  /// Reorders qubits: new qubit i is old qubit order[i].
  DensityMatrix permuted(const std::vector<std::size_t>& order) const;

  /// Trace, Hermiticity and positivity within the documented tolerances.
  bool valid(double trace_tol = 1e-12, double herm_tol = 1e-12, double psd_tol = 1e-10) const;

  /// {"n": n, "data": [[re, im], ...]} row-major.
  std::string to_json() const;

 private:
  void apply_1q(const Eigen::Matrix2cd& u, std::size_t q);
  void apply_2q(const Eigen::Matrix4cd& u, std::size_t a, std::size_t b);

  std::size_t n_ = 0;
  Matrix rho_;
};

/// Dense matrix of a Pauli string (phase included).
Matrix pauli_matrix(const PauliString& p);

/// 1/2 ||a - b||_1 from the eigenvalues of the Hermitian difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

/// Distance between two unitary channels: trace distance of their
/// normalised Choi states, sqrt(1 - |tr(U^dagger V)|^2 / d^2).
double unitary_channel_distance(const Matrix& u, const Matrix& v);

/// Dense unitary of a gate list on n qubits.
Matrix gates_unitary(std::size_t n, const std::vector<Gate>& gates);

}  // namespace qhe
