// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qhe {

/// Raised when two operands act on registers of different sizes.
class SizeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Power of i in {0,1,2,3}, i.e. the phases +1, +i, -1, -i.
using Phase = std::uint8_t;

/// Signed n-qubit Pauli operator.
///
/// The operator is i^phase times the tensor product of single-qubit letters,
/// where bit pair (x, z) selects I (0,0), X (1,0), Z (0,1) or Y (1,1).
/// Y is the Hermitian letter, so +Y means the usual Pauli-Y matrix.
/// Bits are packed 64 per word.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);

  /// Parses "+XIZ", "-iYY", "XZ" (sign optional, 'i' allowed after sign).
  static PauliString parse(std::string_view text);
  /// Single-letter operator on one qubit of an n-qubit register.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, char letter);

  std::size_t size() const { return n_; }
  Phase phase() const { return phase_; }
  void set_phase(Phase p) { phase_ = p & 3u; }

  bool x(std::size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1u; }
  bool z(std::size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1u; }
  void set_x(std::size_t q, bool v);
  void set_z(std::size_t q, bool v);
  /// Letter index 0..3 for I, X, Y, Z.
  int letter(std::size_t q) const;
  void set_letter(std::size_t q, char letter);

  bool is_identity() const;
  std::size_t weight() const;
  /// True when the overall phase is +1 or -1.
  bool is_hermitian() const { return (phase_ & 1u) == 0; }
  /// Copy with the phase set to +1.
  PauliString unsigned_copy() const;

  bool commutes(const PauliString& other) const;

  /// In-place right multiplication: *this = (*this) * rhs.
  PauliString& operator*=(const PauliString& rhs);

  /// Restriction to a subset of qubits (phase kept).
  PauliString restrict_to(const std::vector<std::size_t>& qubits) const;
  /// Embeds this operator into a larger register at the listed positions.
  PauliString embed(std::size_t n_total, const std::vector<std::size_t>& positions) const;
  /// Tensor product this (x) other.
  PauliString tensor(const PauliString& other) const;

  /// Text form such as "+XIZ" or "-iY".
  std::string str() const;

  const std::vector<std::uint64_t>& x_words() const { return xs_; }
  const std::vector<std::uint64_t>& z_words() const { return zs_; }

  friend bool operator==(const PauliString& a, const PauliString& b) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> xs_;
  std::vector<std::uint64_t> zs_;
  Phase phase_ = 0;
};

PauliString operator*(PauliString a, const PauliString& b);

/// Checked product; throws SizeMismatch on length mismatch.
PauliString multiply(const PauliString& a, const PauliString& b);

/// Equality ignoring the phase.
bool same_up_to_phase(const PauliString& a, const PauliString& b);

}  // namespace qhe
