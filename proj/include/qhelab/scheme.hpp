// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qhelab/circuit.hpp"
#include "qhelab/density_matrix.hpp"
#include "qhelab/pauli.hpp"
#include "qhelab/stabilizer_state.hpp"

namespace qhe {

using Key = std::uint64_t;
using GateList = std::vector<Gate>;

/// Gates applying p up to its global phase, on qubits offset + q.
GateList pauli_gates(const PauliString& p, std::size_t offset = 0);

class NotAllowed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Encryption as an isometry: plaintext qubit i moves to data_positions[i],
/// every other cipher qubit starts maximally mixed, then `gates` run.
struct EncryptionProgram {
  std::size_t cipher_qubits = 0;
  std::vector<std::size_t> data_positions;
  GateList gates;
};

/// Decryption as gates on the cipher register followed by a partial trace
/// onto `keep` (plaintext qubit i is cipher qubit keep[i]).
struct DecryptionProgram {
  GateList gates;
  std::vector<std::size_t> keep;
};

/// A QHE scheme over a finite key set indexed 0..key_count()-1.
class Scheme {
 public:
  virtual ~Scheme() = default;

  virtual std::string name() const = 0;
  virtual std::size_t plain_qubits() const = 0;
  virtual std::size_t cipher_qubits() const = 0;
  virtual Key key_count() const = 0;

  virtual EncryptionProgram encryption(Key key) const = 0;
  /// Whether a plaintext computation is in the allowed set.
  virtual bool allowed(const GateList& computation) const = 0;
  /// Server-side computation on the cipher register.
  virtual GateList lift(const GateList& computation) const = 0;
  /// f(key, C): Encr_key o C = lift(C) o Encr_f.
  virtual Key key_transport(Key key, const GateList& computation) const = 0;
  /// Decryption after lift(C) has run on Encr_key.
  virtual DecryptionProgram decryption(Key key, const GateList& computation) const = 0;

  /// Pauli implementing the encryption, for in-place Pauli-frame schemes.
  virtual std::optional<PauliString> key_pauli(Key) const { return std::nullopt; }
  /// Inverse of key_pauli (phase ignored); nullopt when p is not a key.
  virtual std::optional<Key> key_from_pauli(const PauliString&) const { return std::nullopt; }
  /// Whether every Clifford gate on the register is allowed.
  virtual bool allows_all_cliffords() const { return false; }
};

using SchemePtr = std::shared_ptr<const Scheme>;

/// K = {I}.
class TrivialScheme : public Scheme {
 public:
  explicit TrivialScheme(std::size_t n);
  std::string name() const override { return "trivial"; }
  std::size_t plain_qubits() const override { return n_; }
  std::size_t cipher_qubits() const override { return n_; }
  Key key_count() const override { return 1; }
  EncryptionProgram encryption(Key key) const override;
  bool allowed(const GateList& c) const override;
  GateList lift(const GateList& c) const override { return c; }
  Key key_transport(Key key, const GateList&) const override { return key; }
  DecryptionProgram decryption(Key key, const GateList& c) const override;
  std::optional<PauliString> key_pauli(Key) const override { return PauliString(n_); }
  std::optional<Key> key_from_pauli(const PauliString& p) const override;
  bool allows_all_cliffords() const override { return true; }

 private:
  std::size_t n_;
};

/// Uniform Pauli keys on n qubits; key bits (x_q, z_q) sit at 2q and 2q+1.
class PauliKeyScheme : public Scheme {
 public:
  explicit PauliKeyScheme(std::size_t n);
  std::string name() const override { return "pauli"; }
  std::size_t plain_qubits() const override { return n_; }
  std::size_t cipher_qubits() const override { return n_; }
  Key key_count() const override;
  EncryptionProgram encryption(Key key) const override;
  bool allowed(const GateList& c) const override;
  GateList lift(const GateList& c) const override { return c; }
  Key key_transport(Key key, const GateList& c) const override;
  DecryptionProgram decryption(Key key, const GateList& c) const override;
  std::optional<PauliString> key_pauli(Key key) const override;
  std::optional<Key> key_from_pauli(const PauliString& p) const override;
  bool allows_all_cliffords() const override { return true; }

  static PauliString key_to_pauli(std::size_t n, Key key);
  static Key pauli_to_key(const PauliString& p);

 private:
  std::size_t n_;
};

/// Z-only keys for diagonal (IQP) circuits.
class PhaseKeyScheme : public Scheme {
 public:
  explicit PhaseKeyScheme(std::size_t n);
  std::string name() const override { return "phase"; }
  std::size_t plain_qubits() const override { return n_; }
  std::size_t cipher_qubits() const override { return n_; }
  Key key_count() const override;
  EncryptionProgram encryption(Key key) const override;
  bool allowed(const GateList& c) const override;
  GateList lift(const GateList& c) const override { return c; }
  Key key_transport(Key key, const GateList&) const override { return key; }
  DecryptionProgram decryption(Key key, const GateList& c) const override;
  std::optional<PauliString> key_pauli(Key key) const override;
  std::optional<Key> key_from_pauli(const PauliString& p) const override;

 private:
  std::size_t n_;
};

/// Product of component schemes acting on consecutive plaintext blocks.
/// Keys are mixed-radix tuples with component 0 least significant.
class ComposedScheme : public Scheme {
 public:
  explicit ComposedScheme(std::vector<SchemePtr> components);

  std::string name() const override;
  std::size_t plain_qubits() const override { return plain_; }
  std::size_t cipher_qubits() const override { return cipher_; }
  Key key_count() const override { return key_count_; }
  EncryptionProgram encryption(Key key) const override;
  bool allowed(const GateList& c) const override;
  GateList lift(const GateList& c) const override;
  Key key_transport(Key key, const GateList& c) const override;
  DecryptionProgram decryption(Key key, const GateList& c) const override;
  std::optional<PauliString> key_pauli(Key key) const override;
  std::optional<Key> key_from_pauli(const PauliString& p) const override;
  bool allows_all_cliffords() const override;

  const std::vector<SchemePtr>& components() const { return parts_; }
  std::vector<Key> split_key(Key key) const;
  Key join_key(const std::vector<Key>& keys) const;
  /// Whether the Pauli f(key, C) factorises over the component key sets, in
  /// which case the correction gamma is the identity.
  bool transported_key_factorizes(Key key, const GateList& c) const;

 private:
  bool pauli_frame() const;
  /// Component index owning plaintext qubit q.
  std::size_t block_of(std::size_t q) const;

  std::vector<SchemePtr> parts_;
  std::vector<std::size_t> plain_off_;
  std::vector<std::size_t> cipher_off_;
  std::size_t plain_ = 0;
  std::size_t cipher_ = 0;
  Key key_count_ = 1;
};

SchemePtr compose_schemes(const std::vector<SchemePtr>& parts);

// Channel application on either backend.
DensityMatrix encrypt(const Scheme& s, Key key, const DensityMatrix& plain);
StabilizerState encrypt(const Scheme& s, Key key, const StabilizerState& plain);
DensityMatrix decrypt(const DecryptionProgram& d, DensityMatrix cipher);
StabilizerState decrypt(const DecryptionProgram& d, StabilizerState cipher);
DecryptionProgram derive_decryption(const Scheme& s, Key key, const GateList& computation);

/// Runs Encr, lift(C), Decr and returns the plaintext result.
DensityMatrix round_trip(const Scheme& s, Key key, const GateList& computation, const DensityMatrix& plain);

/// (1/|K|) sum_k Encr_k(rho), summed in key order per worker chunk and then
/// in chunk order so the result does not depend on `jobs`.
DensityMatrix ciphertext_average(const Scheme& s, const DensityMatrix& plain, unsigned jobs = 0);

struct SecurityReport {
  double delta = 0.0;
  std::string method;  // "exact-sweep" or "sampled"
  Key key_count = 0;
  std::size_t samples = 0;
  std::size_t witness_a = 0;
  std::size_t witness_b = 0;
  std::string to_json() const;
};

/// Keys are swept exactly up to this many; above it they are sampled.
inline constexpr Key kExactSweepLimit = 1'000'000;

SecurityReport security_delta(const Scheme& s, const std::vector<DensityMatrix>& inputs, unsigned jobs = 0,
                              std::size_t samples = 4096, std::uint64_t seed = 0);

/// Result of checking that encoding commutes with encryption.
struct QecCommutation {
  bool holds = false;
  Key lambda = 0;           // key with Enc o Encr_key = Encr_lambda o Enc
  Key lambda_sharp = 0;     // key with Encr_key o Enc = Enc o Encr_lambda_sharp
  double enc_after_encr = 0.0;  // max deviation of the first identity
  double encr_after_enc = 0.0;  // max deviation of the second identity
  bool key_relation = false;    // f(f(k, L(C)), Enc) == f(lambda_sharp, C)
};

/// `enc` and `computation` act on the plaintext register; L(C) = Enc C Enc^-1.
QecCommutation check_qec_commutation(const Scheme& s, const GateList& enc, const GateList& computation, Key key);

/// Largest absolute entry of Phi1(E_ij) - Phi2(E_ij) over the matrix units of
/// an n-qubit input, a channel-equality test for maps given as callables.
template <class F1, class F2>
double channel_deviation(std::size_t n, F1&& phi1, F2&& phi2);

}  // namespace qhe

#include "qhelab/detail/scheme_channel.inl"
