// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qhelab/density_matrix.hpp"
#include "qhelab/scheme.hpp"
#include "qhelab/stabilizer_state.hpp"
#include "qhelab/transcript.hpp"

namespace qhe {

/// Secret permutation of the 2m columns. Column c of the unencrypted row
/// ends up in column image(c).
class PermKey {
 public:
  static PermKey identity(std::size_t m);
  /// Key index in [0, (2m)!) decoded as a Lehmer code.
  static PermKey from_index(std::size_t m, Key index);
  /// Uniform key by Fisher-Yates.
  static PermKey random(std::size_t m, std::mt19937_64& rng);
  /// One-line cycle notation, e.g. "(0 3 2)(1 4)"; fixed points may be omitted.
  static PermKey parse(std::size_t m, const std::string& cycles);
  static PermKey from_images(std::vector<std::size_t> images);

  std::size_t m() const { return images_.size() / 2; }
  std::size_t image(std::size_t c) const { return images_.at(c); }
  const std::vector<std::size_t>& images() const { return images_; }
  Key index() const;
  PermKey inverse() const;
  /// Physical columns holding the spread data: image(0..m-1).
  std::vector<std::size_t> data_columns() const;
  /// Transpositions that move column c to image(c), applied in order.
  std::vector<std::pair<std::size_t, std::size_t>> swaps() const;
  /// 2m minus the number of cycles.
  std::size_t swap_count() const;
  std::string str() const;

  bool operator==(const PermKey& o) const { return images_ == o.images_; }

 private:
  std::vector<std::size_t> images_;
};

/// (2m)!, the key count; m <= 10.
Key perm_key_count(std::size_t m);

/// Spreads the qubit at `base` over base..base+m-1 (the other m-1 start
/// maximally mixed): 2m-2 CNOTs. For odd m this maps X, Z to X^m, Z^m; for
/// even m only the Z image is transversal.
GateList spread_gates(std::size_t m, std::size_t base = 0);
/// Undoes spread_gates.
GateList unspread_gates(std::size_t m, std::size_t base = 0);

/// sqrt(2^r / C(2m, m)), in log space.
double security_bound(std::size_t r, std::size_t m);
/// log2 of the same bound, for counts beyond integer range.
double security_bound_log2(double r, double m);

/// Whether the plaintext gate set is supported transversally at this m.
/// Odd m: Paulis, H, CNOT, CZ, SWAP; S additionally needs m = 1 mod 4.
/// Even m: only CNOT, CZ, SWAP, Z (computational-basis data).
bool perm_gate_allowed(std::size_t m, const Gate& g);

/// Gate `g` on rows applied identically on every one of the 2m columns.
GateList transversal_gates(std::size_t m, const Gate& g);

/// Column permutation of every row as SWAP gates.
GateList permutation_gates(const PermKey& key, std::size_t rows);

/// Permutation-key scheme on `rows` data rows of 2m columns each. Cipher
/// qubit row*2m + col; key index is the Lehmer code of the permutation.
class PermutationKeyScheme : public Scheme {
 public:
  PermutationKeyScheme(std::size_t m, std::size_t rows);
  std::string name() const override { return "perm"; }
  std::size_t plain_qubits() const override { return rows_; }
  std::size_t cipher_qubits() const override { return rows_ * 2 * m_; }
  Key key_count() const override { return perm_key_count(m_); }
  EncryptionProgram encryption(Key key) const override;
  bool allowed(const GateList& c) const override;
  GateList lift(const GateList& c) const override;
  Key key_transport(Key key, const GateList&) const override { return key; }
  DecryptionProgram decryption(Key key, const GateList& c) const override;

  std::size_t m() const { return m_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t m_;
  std::size_t rows_;
};

/// Swaps to undo the permutation on `rows` rows.
std::size_t decryption_complexity(const PermKey& key, std::size_t rows);

enum class RowRole { Data, Magic, Zero, One, Syndrome };
std::string row_role_name(RowRole role);

/// Server register of encrypted rows sharing one column permutation, with
/// the client's key alongside. Rows are addressed by stable ids; consumed
/// ancilla rows count towards r.
template <class State>
class SpreadRegister {
 public:
  explicit SpreadRegister(PermKey key);

  const PermKey& key() const { return key_; }
  std::size_t m() const { return key_.m(); }
  std::size_t rows() const { return ids_.size(); }
  const State& state() const { return state_.value(); }
  /// Encrypted ancilla rows handed to the server so far.
  std::size_t r() const { return r_; }
  RowRole role(std::size_t id) const;
  std::size_t qubit(std::size_t id, std::size_t col) const;
  const std::vector<std::size_t>& row_ids() const { return ids_; }

  /// Client: spreads and encrypts a k-qubit state onto k new rows (rows
  /// entangled across the first column are allowed). Returns the ids.
  std::vector<std::size_t> add_rows(const State& col0, RowRole role);
  /// Client: |b> repeated on the m data columns, the rest mixed.
  std::size_t add_repetition_row(int b);

  /// Server: plaintext gate on row ids, run on every column.
  void transversal(const Gate& g);
  /// Server: gates on cipher qubit indices as given.
  void apply_physical(const GateList& gates);
  /// Server: Z on each of the 2m columns, then the row is discarded.
  std::vector<int> measure_and_discard(std::size_t id, std::mt19937_64& rng);
  void discard(std::size_t id);

  /// Client: parity of the data columns of a measured row.
  int parity(const std::vector<int>& bits) const;
  /// Client: undoes permutation and spreading on the listed rows and
  /// returns their plaintext, in the order given.
  State decrypt(const std::vector<std::size_t>& ids) const;

 private:
  std::size_t index_of(std::size_t id) const;

  PermKey key_;
  std::optional<State> state_;
  std::vector<std::size_t> ids_;
  std::vector<RowRole> roles_;
  std::size_t next_id_ = 0;
  std::size_t r_ = 0;
};

extern template class SpreadRegister<DensityMatrix>;
extern template class SpreadRegister<StabilizerState>;

/// Gates for a controlled-S from `control` to `target`.
GateList controlled_s_gates(std::size_t control, std::size_t target);

struct PermTOutcome {
  bool success = false;           // probabilistic variant: plaintext carries T
  int parity = 0;                 // client-side parity of the data columns
  std::vector<int> bits;          // 2m bits sent by the server
  std::optional<std::size_t> label;  // deterministic variant: 0 or 1
};

/// Transversal CNOT into a fresh magic row and transversal Z readout. With
/// parity 0 the data row carries T, otherwise T^dagger.
PermTOutcome t_gate_probabilistic(SpreadRegister<DensityMatrix>& reg, std::size_t data_row, std::mt19937_64& rng,
                                  Transcript* transcript = nullptr);

/// As above with an extra |0>, |1> row pair in random order. The client
/// names the row holding |parity> and the server applies a transversal
/// controlled-S from it, so T is applied on every run.
PermTOutcome t_gate_deterministic(SpreadRegister<DensityMatrix>& reg, std::size_t data_row, std::mt19937_64& rng,
                                  Transcript* transcript = nullptr);

/// Measures a row-level stabilizer (Pauli over the listed data rows) into a
/// fresh encrypted |0> row; the client returns the parity of the data columns.
template <class State>
int encrypted_syndrome_round(SpreadRegister<State>& reg, const std::vector<std::size_t>& rows,
                             const PauliString& stabilizer, std::mt19937_64& rng, Transcript* transcript = nullptr);

/// Conditional Pauli on a data row: the client sends the label of a fresh
/// |0> or |1> row and the server applies the controlled Pauli from it.
/// Returns the label.
template <class State>
std::size_t encrypted_conditional_pauli(SpreadRegister<State>& reg, std::size_t row, char pauli, int apply,
                                        std::mt19937_64& rng, Transcript* transcript = nullptr);

/// Inner code concatenated with the column spreading.
struct ConcatenatedCode {
  std::size_t n = 0;  // inner code length (rows)
  std::size_t m = 0;
  GateList inner_encoder;     // on n qubits, data on qubit 0
  PauliString logical_x;      // on n*2m unpermuted cipher qubits
  PauliString logical_z;
};

/// P_1 ... P_n on rows becomes P_1^m ... P_n^m on the data columns.
PauliString concatenated_logical(const PauliString& inner, std::size_t m);

ConcatenatedCode build_concatenated_code(std::size_t n, const GateList& inner_encoder, const PauliString& inner_x,
                                         const PauliString& inner_z, std::size_t m);

/// Inner encoding of a one-qubit plaintext: plain on qubit 0, |0> elsewhere.
DensityMatrix inner_encode(const ConcatenatedCode& code, const DensityMatrix& plain);
StabilizerState inner_encode(const ConcatenatedCode& code, const StabilizerState& plain);

}  // namespace qhe
