// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "qhelab/circuit.hpp"
#include "qhelab/clifford.hpp"
#include "qhelab/density_matrix.hpp"
#include "qhelab/pauli.hpp"
#include "qhelab/scheme.hpp"
#include "qhelab/stabilizer_state.hpp"
#include "qhelab/transcript.hpp"

namespace qhe {

/// Key after conjugation, with the dropped global phase kept for the record.
struct TransportedKey {
  PauliString key;
  Phase global_phase = 0;
};

/// c key c^dagger, so that c . key = key' . c.
TransportedKey transport_key(const PauliString& key, const CliffordOp& c);

DensityMatrix encrypt(const PauliString& key, DensityMatrix plain);
StabilizerState encrypt(const PauliString& key, StabilizerState plain);

/// Server-side evaluation: Clifford gates run verbatim. Anything else throws.
void homomorphic_eval(const Circuit& circuit, DensityMatrix& cipher);
void homomorphic_eval(const Circuit& circuit, StabilizerState& cipher);

/// Encrypted |T> = T|+> ancillas; key i is (x bit, z bit) of ancilla i.
class MagicStateResource {
 public:
  MagicStateResource() = default;
  explicit MagicStateResource(std::vector<std::pair<int, int>> keys) : keys_(std::move(keys)) {}
  static MagicStateResource sample(std::size_t count, std::mt19937_64& rng);

  std::size_t size() const { return keys_.size(); }
  std::size_t remaining() const { return keys_.size() - used_; }
  /// Next unused key; throws when exhausted.
  std::pair<int, int> consume();
  /// Encrypted one-qubit magic state for a key.
  static DensityMatrix prepare(std::pair<int, int> key);

 private:
  std::vector<std::pair<int, int>> keys_;
  std::size_t used_ = 0;
};

/// Server half of T-gate teleportation: adjoins the encrypted magic state,
/// applies CNOT(target -> magic), measures the magic qubit in Z and discards
/// it. Returns the raw outcome.
int inject_t_gate(DensityMatrix& cipher, std::size_t target, const DensityMatrix& magic, std::mt19937_64& rng);

/// Client-side record of how to decrypt the server's register.
///
/// While the program is a Pauli it is kept as a frame; the first T turns it
/// into a gate list G with G sigma G^dagger = plaintext.
class PauliKeyDecoder {
 public:
  explicit PauliKeyDecoder(PauliString key);

  void clifford(const Gate& g);
  /// Server injected T on `qubit` with a magic state of key (a, b) and
  /// reported raw outcome `outcome`.
  void t_gate(std::size_t qubit, std::pair<int, int> magic_key, int outcome);
  /// Decrypts a raw Z measurement of `qubit`.
  int measurement(std::size_t qubit, int raw) const;
  /// Plaintext gets `p` applied (client-side only).
  void multiply_frame(const PauliString& p);

  bool is_pauli_frame() const { return pauli_mode_; }
  const PauliString& frame() const { return frame_; }
  std::size_t t_count() const { return t_count_; }
  /// Decryption gates in time order.
  GateList program() const;

 private:
  std::size_t n_;
  bool pauli_mode_ = true;
  PauliString frame_;
  GateList program_;
  std::size_t t_count_ = 0;
};

/// Largest T count for which decryption stays compact: ceil(log2 n).
std::size_t t_budget(std::size_t n_qubits);

struct PauliKeyRun {
  DensityMatrix output;              // decrypted
  std::map<std::string, int> bits;   // decrypted measurement bits
  Transcript transcript;
  std::vector<std::string> warnings;
  std::size_t decryption_gates = 0;
};

/// Full client/server run of a circuit (Cliffords, T, M, CPAULI) under a
/// Pauli key, on the dense backend.
PauliKeyRun run_pauli_key_circuit(const Circuit& circuit, const DensityMatrix& plain, const PauliString& key,
                                  MagicStateResource& magic, std::mt19937_64& rng);

struct StabilizerMeasurement {
  int raw = 0;        // ancilla outcome seen by the server
  int corrected = 0;  // raw XOR z bit of the ancilla key
};

/// Measures `k` with an ancilla prepared as Encr_{ka}(|+>): controlled-K
/// from the ancilla, then the ancilla is read out in the X basis and dropped.
/// `ka` is a one-qubit key. The x part of `ka` applies k to the data; callers
/// tracking a data key must multiply it by k when ka has an X component.
StabilizerMeasurement encrypted_stabilizer_measurement(DensityMatrix& state, const PauliString& k,
                                                       const PauliString& ka, std::mt19937_64& rng);
StabilizerMeasurement encrypted_stabilizer_measurement(StabilizerState& state, const PauliString& k,
                                                       const PauliString& ka, std::mt19937_64& rng);

/// Gates for controlled-K: CNOT for X, CZ for Z, S^dagger CNOT S for Y.
GateList controlled_pauli_gates(std::size_t control, const PauliString& k);

/// Exact output distribution of H^n C H^n |x> for diagonal C.
std::vector<double> iqp_probabilities(std::size_t n, const GateList& diagonal, std::uint64_t x);
/// Empirical distribution from `samples` draws.
std::vector<double> iqp_distribution(std::size_t n, const GateList& diagonal, std::uint64_t x, std::size_t samples,
                                     std::mt19937_64& rng);
/// As iqp_distribution, but the server only sees the input encrypted with
/// Z^key after the first Hadamard layer; the client XORs the key back out.
std::vector<double> iqp_encrypted_distribution(std::size_t n, const GateList& diagonal, std::uint64_t x,
                                               std::uint64_t z_key, std::size_t samples, std::mt19937_64& rng);

}  // namespace qhe
