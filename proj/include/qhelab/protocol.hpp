// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhelab/circuit.hpp"
#include "qhelab/density_matrix.hpp"
#include "qhelab/pauli.hpp"
#include "qhelab/stabilizer_state.hpp"
#include "qhelab/transcript.hpp"

namespace qhe {

class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class QuantumOp { Prepare, Measure, Handoff, Decrypt, Gate };
const char* quantum_op_name(QuantumOp op);

/// One side of a session. Only the client may hold keys, and the client's
/// quantum ability stops at preparation, measurement, hand-off and Pauli
/// decryption; anything else throws ProtocolViolation.
class PartyState {
 public:
  explicit PartyState(Party role) : role_(role) {}

  Party role() const { return role_; }

  void hold_key(const std::string& name, std::vector<int> bits);
  const std::vector<int>& key(const std::string& name) const;
  bool holds_keys() const { return !keys_.empty(); }

  /// Records a quantum operation, checking it against the role.
  void quantum(QuantumOp op);
  std::size_t quantum_ops(QuantumOp op) const;

  void take_register(const std::string& label);
  void give_register(const std::string& label);
  bool owns(const std::string& label) const;
  const std::vector<std::string>& registers() const { return registers_; }

  void remember(const std::string& label, std::vector<int> bits);
  const std::map<std::string, std::vector<int>>& memory() const { return memory_; }

  void push(std::string sub_protocol) { pending_.push_back(std::move(sub_protocol)); }
  void pop(const std::string& sub_protocol);
  const std::vector<std::string>& pending() const { return pending_; }

 private:
  Party role_;
  std::map<std::string, std::vector<int>> keys_;
  std::map<QuantumOp, std::size_t> ops_;
  std::vector<std::string> registers_;
  std::map<std::string, std::vector<int>> memory_;
  std::vector<std::string> pending_;
};

enum class SchemeKind { Pauli, Perm };
SchemeKind parse_scheme_kind(const std::string& name);
const char* scheme_kind_name(SchemeKind kind);

/// What the client wants done. Pauli sessions accept Cliffords, T (dense
/// only), measurements and classical Paulis; permutation sessions accept
/// transversal gates and T (deterministic variant, dense only).
struct SessionSpec {
  SchemeKind scheme = SchemeKind::Pauli;
  std::size_t m = 1;  // permutation key half-width
  Circuit circuit;
  /// Encrypted stabilizer measurements after the circuit, on the data qubits.
  std::vector<PauliString> stabilizers;
  /// Canary: the client sends its key in clear and the server strips the pad
  /// from its own readouts.
  bool leak_key = false;
};

struct SessionResult {
  DensityMatrix output;              // decrypted
  std::map<std::string, int> bits;   // decrypted measurement bits
  std::vector<int> syndrome;         // decrypted stabilizer outcomes
  Transcript transcript;
};

/// Encrypt, hand off, evaluate with any interactive sub-protocols, return,
/// decrypt. Dense backend.
SessionResult run_session(const SessionSpec& spec, const DensityMatrix& plain, std::mt19937_64& rng);
/// Tableau backend; no T gates.
SessionResult run_session(const SessionSpec& spec, const StabilizerState& plain, std::mt19937_64& rng);

/// Unencrypted reference for circuits without measurements.
DensityMatrix plain_evaluation(const Circuit& circuit, const DensityMatrix& plain);

/// Product state from single-qubit names 0 1 + - +i -i T, either run
/// together ("0+i1") or comma separated ("0,+i,T").
DensityMatrix parse_plaintext(const std::string& spec);
/// As above for stabilizer states (T not allowed).
StabilizerState parse_stabilizer_plaintext(const std::string& spec);

/// Key-averaged server register after a Pauli-key Clifford session, and the
/// key-free simulator's register. Clifford gates only, n <= 3.
DensityMatrix averaged_server_view(const Circuit& circuit, const DensityMatrix& plain);
DensityMatrix simulated_server_view(std::size_t n);

struct SlotLeakage {
  std::size_t index = 0;  // position among classical messages
  std::string label;
  Party sender = Party::Server;
  std::size_t support = 0;  // distinct payloads seen
  double tv = 0;            // max over plaintext pairs
};

struct LeakageReport {
  std::size_t plaintexts = 0;
  std::size_t samples = 0;  // per plaintext
  std::vector<SlotLeakage> slots;
  double max_tv = 0;

  std::string to_json() const;
};

/// Compares the empirical distribution of each classical message slot
/// across plaintexts. Needs at least `min_samples` transcripts each.
LeakageReport audit_transcripts(const std::vector<std::vector<Transcript>>& by_plaintext,
                                std::size_t min_samples = 1000);

/// Runs `samples` seeded sessions per plaintext on up to `jobs` threads and
/// audits them. Session i of plaintext p uses seed (seed, p, i).
LeakageReport audit_sessions(const SessionSpec& spec, const std::vector<DensityMatrix>& plaintexts,
                             std::size_t samples, std::uint64_t seed, unsigned jobs = 1,
                             std::size_t min_samples = 1000);

/// Deterministic per-session generator.
std::mt19937_64 session_rng(std::uint64_t seed, std::uint64_t plaintext, std::uint64_t index);

/// Session config, JSON:
///   {"scheme": "pauli"|"perm", "m": 1, "circuit": "file.qc" | "circuit_text": "...",
///    "plaintexts": ["0", "1"], "stabilizers": ["ZZI"], "seed": 1, "samples": 1000,
///    "leak_key": false}
/// Relative circuit paths resolve against `base_dir`.
struct SessionConfig {
  SessionSpec spec;
  std::vector<std::string> plaintexts;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
};
SessionConfig parse_session_config(const std::string& json_text, const std::string& base_dir = ".");

}  // namespace qhe
