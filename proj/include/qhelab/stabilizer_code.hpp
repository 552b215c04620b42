// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhelab/clifford.hpp"
#include "qhelab/density_matrix.hpp"
#include "qhelab/pauli.hpp"
#include "qhelab/scheme.hpp"
#include "qhelab/stabilizer_state.hpp"

namespace qhe {

using Syndrome = std::vector<int>;

class Uncorrectable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AncillaExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// [[n, k, d]] stabilizer code. Logical qubit i enters the encoder on qubit
/// i; qubits k..n-1 start in |0>.
struct StabilizerCode {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<std::size_t> d;  // against errors built from `corrects`
  std::string corrects = "XYZ";   // Pauli letters the decoding table uses
  std::vector<PauliString> generators;
  std::vector<PauliString> logical_x;
  std::vector<PauliString> logical_z;
  CliffordOp encoder;

  /// Checks commutation relations, independence and that the encoder maps
  /// Z_{k+j} into the stabilizer group and Z_i, X_i onto the logicals.
  void validate() const;
  std::size_t correctable_weight() const { return d ? (*d - 1) / 2 : 0; }

  static StabilizerCode repetition();
  static StabilizerCode phase_flip();
  static StabilizerCode steane();
  /// "repetition", "phase-flip" or "steane".
  static StabilizerCode named(const std::string& name);

  /// Text format, one directive per line ('#' comments):
  ///   name <id> | n <int> | k <int> | d <int> | corrects <letters>
  ///   stabilizer <pauli> | logical_x <pauli> | logical_z <pauli>
  ///   gate <circuit line>      (encoder; synthesised when absent)
  static StabilizerCode parse(const std::string& text);
  std::string serialize() const;
};

/// Encoder from generators and logicals, with destabilizers found by
/// symplectic elimination.
CliffordOp synthesize_encoder(std::size_t n, const std::vector<PauliString>& generators,
                              const std::vector<PauliString>& logical_x, const std::vector<PauliString>& logical_z);

/// Logical state on k qubits -> encoded state on n qubits.
DensityMatrix encode(const StabilizerCode& code, const DensityMatrix& logical);
StabilizerState encode(const StabilizerCode& code, const StabilizerState& logical);

/// Nondestructive generator measurements, each through one |+> ancilla
/// (controlled-generator, X readout). `ancillas` caps the supply.
Syndrome extract_syndrome(DensityMatrix& state, const StabilizerCode& code, std::mt19937_64& rng,
                          std::optional<std::size_t> ancillas = std::nullopt);
Syndrome extract_syndrome(StabilizerState& state, const StabilizerCode& code, std::mt19937_64& rng,
                          std::optional<std::size_t> ancillas = std::nullopt);

/// Bit j is 1 when the error anticommutes with generator j.
Syndrome syndrome_of(const StabilizerCode& code, const PauliString& error);

/// Minimal-weight correction over the code's `corrects` letters up to the
/// correctable weight; first in (qubit index, X<Y<Z) order wins ties.
std::map<Syndrome, PauliString> decoding_table(const StabilizerCode& code);
/// Throws Uncorrectable for syndromes outside the table.
PauliString lookup_decode(const Syndrome& syndrome, const StabilizerCode& code);

/// Physical operator for a logical Pauli on the k logical qubits.
PauliString logical_pauli(const StabilizerCode& code, const PauliString& logical);

/// Physical gates L(C) with Enc o C = L(C) o Enc on the code space. Paulis
/// lift to the logical operators; one-qubit gates to their transversal
/// version (or its inverse power when that is the one that works). Each
/// gate is verified; throws NotAllowed when no candidate works.
GateList logical_lift(const StabilizerCode& code, const GateList& logical);

/// Pauli-frame data scheme on the k data qubits composed with a trivially
/// keyed (n-k)-qubit ancilla block.
SchemePtr compose_with_stabilizer_code(const SchemePtr& data_scheme, const StabilizerCode& code);

template <class State>
struct EncryptedQecRun {
  Syndrome syndrome;
  PauliString correction;
  State output;  // decrypted and decoded, k qubits
};

/// Client encrypts plain (k qubits) with `key` under `scheme` (from
/// compose_with_stabilizer_code) and encodes; the server suffers `error`,
/// extracts the syndrome and corrects on its own, then runs the inverse
/// encoder; the client decrypts.
template <class State>
EncryptedQecRun<State> run_encrypted_qec(const Scheme& scheme, const StabilizerCode& code, Key key,
                                         const State& plain, const PauliString& error, std::mt19937_64& rng);

extern template EncryptedQecRun<DensityMatrix> run_encrypted_qec(const Scheme&, const StabilizerCode&, Key,
                                                                 const DensityMatrix&, const PauliString&,
                                                                 std::mt19937_64&);
extern template EncryptedQecRun<StabilizerState> run_encrypted_qec(const Scheme&, const StabilizerCode&, Key,
                                                                   const StabilizerState&, const PauliString&,
                                                                   std::mt19937_64&);

}  // namespace qhe
