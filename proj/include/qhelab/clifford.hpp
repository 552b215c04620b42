// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "qhelab/circuit.hpp"
#include "qhelab/pauli.hpp"

namespace qhe {

/// Conjugates `p` in place by a single Clifford gate: p <- G p G^dagger.
/// Throws for T/TDG.
void conjugate_by_gate(PauliString& p, const Gate& g);

/// n-qubit Clifford unitary held as a stabilizer tableau.
///
/// The tableau stores the images U X_i U^dagger and U Z_i U^dagger. The gate
/// list records an elementary-gate decomposition (first gate applied first),
/// so every operator can be replayed on any backend.
class CliffordOp {
 public:
  CliffordOp() = default;
  static CliffordOp identity(std::size_t n);
  static CliffordOp from_gates(std::size_t n, const std::vector<Gate>& gates);
  static CliffordOp from_circuit(const Circuit& c);

  /// Builds a Clifford whose tableau matches the requested images, including
  /// signs. Images must form a valid symplectic basis.
  static CliffordOp from_images(const std::vector<PauliString>& x_images,
                                const std::vector<PauliString>& z_images);

  std::size_t n_qubits() const { return n_; }
  const PauliString& x_image(std::size_t q) const { return x_images_[q]; }
  const PauliString& z_image(std::size_t q) const { return z_images_[q]; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// this <- g o this.
  void append(const Gate& g);
  void append(const std::vector<Gate>& gs);

  /// U p U^dagger with exact phase.
  PauliString conjugate(const PauliString& p) const;

  CliffordOp inverse() const;

  /// Images pairwise satisfy the canonical commutation relations.
  bool is_valid_symplectic() const;

  /// Same tableau (signs included); gate lists may differ.
  bool same_action(const CliffordOp& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> x_images_;
  std::vector<PauliString> z_images_;
  std::vector<Gate> gates_;
};

PauliString conjugate(const CliffordOp& c, const PauliString& p);

/// c2 o c1 (c1 applied first).
CliffordOp compose(const CliffordOp& c2, const CliffordOp& c1);

/// Embeds `c` into an n_total register at the given qubit positions.
CliffordOp embed(const CliffordOp& c, std::size_t n_total, const std::vector<std::size_t>& positions);

/// Gates mapping the pair (p, q) to (+-X_pivot, +-Z_pivot). Only qubits in
/// `active` (which must contain `pivot`) are touched; p and q must anticommute
/// and be supported on `active`.
std::vector<Gate> gates_reducing_pair(const PauliString& p, const PauliString& q, std::size_t pivot,
                                      const std::vector<std::size_t>& active);

/// Uniformly random n-qubit Clifford from the given 64-bit seed.
CliffordOp random_clifford(std::size_t n, std::uint64_t seed);

}  // namespace qhe
