// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/pauli_key.hpp"

#include <bit>
#include <cmath>

namespace qhe {

namespace {

PauliString one_qubit_key(int a, int b) {
  PauliString p(1);
  p.set_x(0, a);
  p.set_z(0, b);
  return p;
}

template <class State>
State plus_ancilla();

template <>
DensityMatrix plus_ancilla<DensityMatrix>() {
  return DensityMatrix::named("+");
}

template <>
StabilizerState plus_ancilla<StabilizerState>() {
  return StabilizerState::from_generators(1, {PauliString::parse("X")});
}

template <class State>
StabilizerMeasurement stabilizer_measurement_impl(State& state, const PauliString& k, const PauliString& ka,
                                                  std::mt19937_64& rng) {
  const std::size_t n = state.n_qubits();
  if (k.size() != n) throw SizeMismatch("stabilizer size does not match register");
  if (!k.is_hermitian()) throw std::invalid_argument("stabilizer must be Hermitian");
  if (ka.size() != 1) throw SizeMismatch("ancilla key must act on one qubit");

  State anc = plus_ancilla<State>();
  anc.apply_pauli(ka.unsigned_copy());
  State joint = state.tensor(anc);
  for (const auto& g : controlled_pauli_gates(n, k)) joint.apply_gate(g);
  joint.apply_gate({GateKind::H, n, 0});
  const auto rec = joint.measure_pauli(PauliString::single(n + 1, n, 'Z'), rng, "ancilla");

  std::vector<std::size_t> keep(n);
  for (std::size_t i = 0; i < n; ++i) keep[i] = i;
  state = joint.reduced(keep);

  StabilizerMeasurement out;
  out.raw = rec.outcome;
  out.corrected = rec.outcome ^ static_cast<int>(ka.z(0)) ^ (k.phase() == 2 ? 1 : 0);
  return out;
}

}  // namespace

TransportedKey transport_key(const PauliString& key, const CliffordOp& c) {
  PauliString out = c.conjugate(key);
  const Phase dropped = static_cast<Phase>((out.phase() + 4 - key.phase()) & 3u);
  out.set_phase(0);
  return {out, dropped};
}

DensityMatrix encrypt(const PauliString& key, DensityMatrix plain) {
  plain.apply_pauli(key);
  return plain;
}

StabilizerState encrypt(const PauliString& key, StabilizerState plain) {
  plain.apply_pauli(key);
  return plain;
}

void homomorphic_eval(const Circuit& circuit, DensityMatrix& cipher) {
  if (circuit.n_qubits() > cipher.n_qubits()) throw SizeMismatch("circuit larger than register");
  cipher.apply_gates(circuit.clifford_gates());
}

void homomorphic_eval(const Circuit& circuit, StabilizerState& cipher) {
  if (circuit.n_qubits() > cipher.n_qubits()) throw SizeMismatch("circuit larger than register");
  cipher.apply_gates(circuit.clifford_gates());
}

// ---------------------------------------------------------------- magic

MagicStateResource MagicStateResource::sample(std::size_t count, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> keys;
  for (std::size_t i = 0; i < count; ++i) {
    const auto r = rng();
    keys.emplace_back(static_cast<int>(r & 1u), static_cast<int>((r >> 1) & 1u));
  }
  return MagicStateResource(std::move(keys));
}

std::pair<int, int> MagicStateResource::consume() {
  if (used_ >= keys_.size()) throw std::runtime_error("magic state resource exhausted");
  return keys_[used_++];
}

DensityMatrix MagicStateResource::prepare(std::pair<int, int> key) {
  DensityMatrix m = DensityMatrix::named("T");
  m.apply_pauli(one_qubit_key(key.first, key.second));
  return m;
}

int inject_t_gate(DensityMatrix& cipher, std::size_t target, const DensityMatrix& magic, std::mt19937_64& rng) {
  const std::size_t n = cipher.n_qubits();
  if (target >= n) throw std::out_of_range("T target outside register");
  if (magic.n_qubits() != 1) throw SizeMismatch("magic state must be one qubit");
  DensityMatrix joint = cipher.tensor(magic);
  joint.apply_gate({GateKind::CNOT, target, n});
  const auto rec = joint.measure_pauli(PauliString::single(n + 1, n, 'Z'), rng, "magic");
  std::vector<std::size_t> keep(n);
  for (std::size_t i = 0; i < n; ++i) keep[i] = i;
  cipher = joint.reduced(keep);
  return rec.outcome;
}

// ---------------------------------------------------------------- decoder

PauliKeyDecoder::PauliKeyDecoder(PauliString key) : n_(key.size()), frame_(std::move(key)) {
  frame_.set_phase(0);
}

void PauliKeyDecoder::clifford(const Gate& g) {
  if (!g.clifford()) throw std::invalid_argument("use t_gate for T");
  if (pauli_mode_) {
    conjugate_by_gate(frame_, g);
    frame_.set_phase(0);
    return;
  }
  // G' = g G g^dagger
  GateList next = inverse_gates({g});
  next.insert(next.end(), program_.begin(), program_.end());
  next.push_back(g);
  program_ = std::move(next);
}

void PauliKeyDecoder::t_gate(std::size_t qubit, std::pair<int, int> magic_key, int outcome) {
  if (qubit >= n_) throw std::out_of_range("T target outside register");
  if (pauli_mode_) {
    program_ = pauli_gates(frame_);
    pauli_mode_ = false;
  }
  // The server's qubit received V = Z^b T^e with e = +1 iff outcome XOR a is 0;
  // the new program is T G V^dagger.
  const bool plus = ((outcome ^ magic_key.first) & 1) == 0;
  GateList next;
  if (magic_key.second) next.push_back({GateKind::Z, qubit, 0});
  next.push_back({plus ? GateKind::TDG : GateKind::T, qubit, 0});
  next.insert(next.end(), program_.begin(), program_.end());
  next.push_back({GateKind::T, qubit, 0});
  program_ = std::move(next);
  ++t_count_;
}

int PauliKeyDecoder::measurement(std::size_t qubit, int raw) const {
  if (!pauli_mode_) throw std::logic_error("measurement after a T gate is not supported by the Pauli-key decoder");
  if (qubit >= n_) throw std::out_of_range("measured qubit outside register");
  return raw ^ static_cast<int>(frame_.x(qubit));
}

void PauliKeyDecoder::multiply_frame(const PauliString& p) {
  if (p.size() != n_) throw SizeMismatch("frame update size mismatch");
  if (pauli_mode_) {
    frame_ = p.unsigned_copy() * frame_;
    frame_.set_phase(0);
    return;
  }
  for (const auto& g : pauli_gates(p)) program_.push_back(g);
}

GateList PauliKeyDecoder::program() const { return pauli_mode_ ? pauli_gates(frame_) : program_; }

std::size_t t_budget(std::size_t n_qubits) {
  if (n_qubits <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(n_qubits - 1));
}

// ---------------------------------------------------------------- session

PauliKeyRun run_pauli_key_circuit(const Circuit& circuit, const DensityMatrix& plain, const PauliString& key,
                                  MagicStateResource& magic, std::mt19937_64& rng) {
  const std::size_t n = plain.n_qubits();
  if (circuit.n_qubits() > n) throw SizeMismatch("circuit larger than plaintext register");
  if (key.size() != n) throw SizeMismatch("key size does not match plaintext");
  if (magic.remaining() < circuit.t_count()) throw std::runtime_error("magic state resource exhausted");

  PauliKeyRun run;
  PauliKeyDecoder client(key);
  DensityMatrix server = encrypt(key, plain);
  run.transcript.handoff(Party::Client, "ciphertext", n);

  for (const auto& el : circuit.elements()) {
    if (const auto* g = std::get_if<Gate>(&el)) {
      server.apply_gate(*g);
      client.clifford(*g);
    } else if (const auto* t = std::get_if<TMarker>(&el)) {
      const auto mk = magic.consume();
      run.transcript.handoff(Party::Client, "magic", 1);
      const int o = inject_t_gate(server, t->qubit, MagicStateResource::prepare(mk), rng);
      run.transcript.classical(Party::Server, "t-outcome", {o});
      client.t_gate(t->qubit, mk, o);
    } else if (const auto* m = std::get_if<MeasureMarker>(&el)) {
      const auto rec = server.measure_pauli(PauliString::single(n, m->qubit, 'Z'), rng, m->bit);
      run.transcript.classical(Party::Server, "measurement", {rec.outcome});
      run.bits[m->bit] = client.measurement(m->qubit, rec.outcome);
    } else if (const auto* cp = std::get_if<ClassicalPauli>(&el)) {
      if (run.bits.at(cp->bit)) client.multiply_frame(PauliString::single(n, cp->qubit, cp->pauli));
    }
  }
  if (client.t_count() > t_budget(n)) {
    run.warnings.push_back("T count " + std::to_string(client.t_count()) + " exceeds the compact budget of " +
                           std::to_string(t_budget(n)) + " for " + std::to_string(n) + " qubits");
  }

  run.transcript.handoff(Party::Server, "result", n);
  const GateList prog = client.program();
  run.decryption_gates = prog.size();
  server.apply_gates(prog);
  run.output = std::move(server);
  return run;
}

// ---------------------------------------------------------------- fig. 3

GateList controlled_pauli_gates(std::size_t control, const PauliString& k) {
  GateList out;
  for (std::size_t q = 0; q < k.size(); ++q) {
    if (q == control && k.letter(q) != 0) throw std::invalid_argument("control overlaps stabilizer support");
    switch (k.letter(q)) {
      case 1: out.push_back({GateKind::CNOT, control, q}); break;
      case 3: out.push_back({GateKind::CZ, control, q}); break;
      case 2:
        out.insert(out.end(), 3, Gate{GateKind::S, q, 0});
        out.push_back({GateKind::CNOT, control, q});
        out.push_back({GateKind::S, q, 0});
        break;
      default: break;
    }
  }
  return out;
}

StabilizerMeasurement encrypted_stabilizer_measurement(DensityMatrix& state, const PauliString& k,
                                                       const PauliString& ka, std::mt19937_64& rng) {
  return stabilizer_measurement_impl(state, k, ka, rng);
}

StabilizerMeasurement encrypted_stabilizer_measurement(StabilizerState& state, const PauliString& k,
                                                       const PauliString& ka, std::mt19937_64& rng) {
  return stabilizer_measurement_impl(state, k, ka, rng);
}

// ---------------------------------------------------------------- IQP

namespace {

void check_diagonal(std::size_t n, const GateList& c) {
  for (const auto& g : c) {
    if (!g.diagonal()) throw std::invalid_argument(std::string("non-diagonal gate ") + gate_name(g.kind));
    if (g.q0 >= n || (g.two_qubit() && g.q1 >= n)) throw std::out_of_range("gate qubit outside register");
  }
}

std::vector<double> iqp_from_state(std::size_t n, const GateList& diagonal, DensityMatrix rho) {
  rho.apply_gates(diagonal);
  for (std::size_t q = 0; q < n; ++q) rho.apply_gate({GateKind::H, q, 0});
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::max(0.0, rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
  }
  return p;
}

std::vector<double> sample_histogram(const std::vector<double>& p, std::size_t samples, std::mt19937_64& rng,
                                     std::uint64_t xor_mask) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
  std::vector<double> hist(p.size(), 0.0);
  for (std::size_t i = 0; i < samples; ++i) hist[dist(rng) ^ xor_mask] += 1.0;
  for (auto& h : hist) h /= static_cast<double>(samples);
  return hist;
}

DensityMatrix hadamard_input(std::size_t n, std::uint64_t x) {
  DensityMatrix rho = DensityMatrix::basis_state(n, x);
  for (std::size_t q = 0; q < n; ++q) rho.apply_gate({GateKind::H, q, 0});
  return rho;
}

}  // namespace

std::vector<double> iqp_probabilities(std::size_t n, const GateList& diagonal, std::uint64_t x) {
  check_diagonal(n, diagonal);
  return iqp_from_state(n, diagonal, hadamard_input(n, x));
}

std::vector<double> iqp_distribution(std::size_t n, const GateList& diagonal, std::uint64_t x, std::size_t samples,
                                     std::mt19937_64& rng) {
  return sample_histogram(iqp_probabilities(n, diagonal, x), samples, rng, 0);
}

std::vector<double> iqp_encrypted_distribution(std::size_t n, const GateList& diagonal, std::uint64_t x,
                                               std::uint64_t z_key, std::size_t samples, std::mt19937_64& rng) {
  check_diagonal(n, diagonal);
  if (z_key >> n) throw std::out_of_range("key outside key space");
  DensityMatrix rho = hadamard_input(n, x);
  PauliString key(n);
  // Bit q of an index is qubit n-1-q.
  for (std::size_t q = 0; q < n; ++q) key.set_z(q, (z_key >> (n - 1 - q)) & 1u);
  rho.apply_pauli(key);
  return sample_histogram(iqp_from_state(n, diagonal, std::move(rho)), samples, rng, z_key);
}

}  // namespace qhe
