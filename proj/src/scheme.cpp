// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/scheme.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <json.hpp>

#include "qhelab/clifford.hpp"

namespace qhe {

namespace {

std::vector<std::size_t> iota(std::size_t n, std::size_t offset = 0) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = offset + i;
  return v;
}

void check_gates_in_range(const GateList& c, std::size_t n) {
  for (const auto& g : c) {
    if (g.q0 >= n || (g.two_qubit() && g.q1 >= n)) throw std::out_of_range("gate qubit outside register");
  }
}

// Conjugation by a gate list in the Heisenberg direction: returns C p C^dagger.
PauliString forward(const PauliString& p, const GateList& c) {
  PauliString out = p;
  for (const auto& g : c) {
    if (!g.clifford()) {
      // T commutes with Z-type frames only.
      if (out.x(g.q0)) throw NotAllowed("T gate acting on an X-type key");
      continue;
    }
    conjugate_by_gate(out, g);
  }
  return out;
}

// C^dagger p C.
PauliString backward(const PauliString& p, const GateList& c) { return forward(p, inverse_gates(c)); }

Gate shifted(Gate g, std::size_t offset) {
  g.q0 += offset;
  if (g.two_qubit()) g.q1 += offset;
  return g;
}

Gate localized(Gate g, std::size_t offset) {
  g.q0 -= offset;
  if (g.two_qubit()) g.q1 -= offset;
  return g;
}

// New qubit order for placing data and mixed ancillas into the cipher layout.
std::vector<std::size_t> placement_order(const EncryptionProgram& prog) {
  const std::size_t n = prog.data_positions.size();
  std::vector<std::size_t> order(prog.cipher_qubits, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    if (prog.data_positions[i] >= prog.cipher_qubits || order[prog.data_positions[i]] != SIZE_MAX) {
      throw std::logic_error("encryption program has invalid data positions");
    }
    order[prog.data_positions[i]] = i;
  }
  std::size_t next = n;
  for (auto& o : order) {
    if (o == SIZE_MAX) o = next++;
  }
  return order;
}

}  // namespace

GateList pauli_gates(const PauliString& p, std::size_t offset) {
  GateList out;
  for (std::size_t q = 0; q < p.size(); ++q) {
    switch (p.letter(q)) {
      case 1: out.push_back({GateKind::X, q + offset, 0}); break;
      case 2: out.push_back({GateKind::Y, q + offset, 0}); break;
      case 3: out.push_back({GateKind::Z, q + offset, 0}); break;
      default: break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- trivial

TrivialScheme::TrivialScheme(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("scheme needs at least one qubit");
}

EncryptionProgram TrivialScheme::encryption(Key key) const {
  if (key != 0) throw std::out_of_range("key outside key space");
  return {n_, iota(n_), {}};
}

bool TrivialScheme::allowed(const GateList& c) const {
  return std::all_of(c.begin(), c.end(), [&](const Gate& g) { return g.q0 < n_ && (!g.two_qubit() || g.q1 < n_); });
}

DecryptionProgram TrivialScheme::decryption(Key key, const GateList& c) const {
  if (key != 0) throw std::out_of_range("key outside key space");
  if (!allowed(c)) throw NotAllowed("computation not allowed by trivial scheme");
  return {{}, iota(n_)};
}

std::optional<Key> TrivialScheme::key_from_pauli(const PauliString& p) const {
  if (p.size() != n_ || !p.is_identity()) return std::nullopt;
  return 0;
}

// ---------------------------------------------------------------- pauli

PauliKeyScheme::PauliKeyScheme(std::size_t n) : n_(n) {
  if (n == 0 || n > 31) throw std::invalid_argument("pauli scheme supports 1..31 qubits");
}

Key PauliKeyScheme::key_count() const { return Key{1} << (2 * n_); }

PauliString PauliKeyScheme::key_to_pauli(std::size_t n, Key key) {
  if (key >> (2 * n)) throw std::out_of_range("key outside key space");
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) {
    p.set_x(q, (key >> (2 * q)) & 1u);
    p.set_z(q, (key >> (2 * q + 1)) & 1u);
  }
  return p;
}

Key PauliKeyScheme::pauli_to_key(const PauliString& p) {
  Key k = 0;
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p.x(q)) k |= Key{1} << (2 * q);
    if (p.z(q)) k |= Key{1} << (2 * q + 1);
  }
  return k;
}

EncryptionProgram PauliKeyScheme::encryption(Key key) const {
  return {n_, iota(n_), pauli_gates(key_to_pauli(n_, key))};
}

bool PauliKeyScheme::allowed(const GateList& c) const {
  return std::all_of(c.begin(), c.end(), [&](const Gate& g) {
    return g.clifford() && g.q0 < n_ && (!g.two_qubit() || g.q1 < n_);
  });
}

Key PauliKeyScheme::key_transport(Key key, const GateList& c) const {
  if (!allowed(c)) throw NotAllowed("pauli scheme allows Clifford gates only");
  return pauli_to_key(backward(key_to_pauli(n_, key), c));
}

DecryptionProgram PauliKeyScheme::decryption(Key key, const GateList& c) const {
  if (!allowed(c)) throw NotAllowed("pauli scheme allows Clifford gates only");
  return {pauli_gates(forward(key_to_pauli(n_, key), c)), iota(n_)};
}

std::optional<PauliString> PauliKeyScheme::key_pauli(Key key) const { return key_to_pauli(n_, key); }

std::optional<Key> PauliKeyScheme::key_from_pauli(const PauliString& p) const {
  if (p.size() != n_) return std::nullopt;
  return pauli_to_key(p);
}

// ---------------------------------------------------------------- phase

PhaseKeyScheme::PhaseKeyScheme(std::size_t n) : n_(n) {
  if (n == 0 || n > 63) throw std::invalid_argument("phase scheme supports 1..63 qubits");
}

Key PhaseKeyScheme::key_count() const { return Key{1} << n_; }

std::optional<PauliString> PhaseKeyScheme::key_pauli(Key key) const {
  if (key >> n_) throw std::out_of_range("key outside key space");
  PauliString p(n_);
  for (std::size_t q = 0; q < n_; ++q) p.set_z(q, (key >> q) & 1u);
  return p;
}

std::optional<Key> PhaseKeyScheme::key_from_pauli(const PauliString& p) const {
  if (p.size() != n_) return std::nullopt;
  Key k = 0;
  for (std::size_t q = 0; q < n_; ++q) {
    if (p.x(q)) return std::nullopt;
    if (p.z(q)) k |= Key{1} << q;
  }
  return k;
}

EncryptionProgram PhaseKeyScheme::encryption(Key key) const { return {n_, iota(n_), pauli_gates(*key_pauli(key))}; }

bool PhaseKeyScheme::allowed(const GateList& c) const {
  return std::all_of(c.begin(), c.end(), [&](const Gate& g) {
    return g.diagonal() && g.q0 < n_ && (!g.two_qubit() || g.q1 < n_);
  });
}

DecryptionProgram PhaseKeyScheme::decryption(Key key, const GateList& c) const {
  if (!allowed(c)) throw NotAllowed("phase scheme allows diagonal gates only");
  return {pauli_gates(*key_pauli(key)), iota(n_)};
}

// ---------------------------------------------------------------- composed

ComposedScheme::ComposedScheme(std::vector<SchemePtr> components) : parts_(std::move(components)) {
  if (parts_.empty()) throw std::invalid_argument("compose needs at least one scheme");
  for (const auto& p : parts_) {
    if (!p) throw std::invalid_argument("null scheme");
    plain_off_.push_back(plain_);
    cipher_off_.push_back(cipher_);
    plain_ += p->plain_qubits();
    cipher_ += p->cipher_qubits();
    const Key k = p->key_count();
    if (k != 0 && key_count_ > UINT64_MAX / k) throw std::invalid_argument("composed key space too large");
    key_count_ *= k;
  }
}

std::string ComposedScheme::name() const {
  std::string out = "composed(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ",";
    out += parts_[i]->name();
  }
  return out + ")";
}

std::vector<Key> ComposedScheme::split_key(Key key) const {
  if (key >= key_count_) throw std::out_of_range("key outside key space");
  std::vector<Key> out;
  for (const auto& p : parts_) {
    out.push_back(key % p->key_count());
    key /= p->key_count();
  }
  return out;
}

Key ComposedScheme::join_key(const std::vector<Key>& keys) const {
  if (keys.size() != parts_.size()) throw SizeMismatch("join_key: component count mismatch");
  Key out = 0;
  for (std::size_t i = parts_.size(); i-- > 0;) {
    if (keys[i] >= parts_[i]->key_count()) throw std::out_of_range("component key outside key space");
    out = out * parts_[i]->key_count() + keys[i];
  }
  return out;
}

bool ComposedScheme::pauli_frame() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const SchemePtr& p) {
    return p->key_pauli(0).has_value() && p->plain_qubits() == p->cipher_qubits();
  });
}

bool ComposedScheme::allows_all_cliffords() const {
  return pauli_frame() &&
         std::all_of(parts_.begin(), parts_.end(), [](const SchemePtr& p) { return p->allows_all_cliffords(); });
}

std::size_t ComposedScheme::block_of(std::size_t q) const {
  if (q >= plain_) throw std::out_of_range("gate qubit outside register");
  const auto it = std::upper_bound(plain_off_.begin(), plain_off_.end(), q);
  return static_cast<std::size_t>(it - plain_off_.begin()) - 1;
}

EncryptionProgram ComposedScheme::encryption(Key key) const {
  const auto keys = split_key(key);
  EncryptionProgram out{cipher_, {}, {}};
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto prog = parts_[i]->encryption(keys[i]);
    for (std::size_t pos : prog.data_positions) out.data_positions.push_back(pos + cipher_off_[i]);
    for (const auto& g : prog.gates) out.gates.push_back(shifted(g, cipher_off_[i]));
  }
  return out;
}

bool ComposedScheme::allowed(const GateList& c) const {
  const bool cross_ok = allows_all_cliffords();
  for (const auto& g : c) {
    if (g.q0 >= plain_ || (g.two_qubit() && g.q1 >= plain_)) return false;
    const std::size_t b = block_of(g.q0);
    if (g.two_qubit() && block_of(g.q1) != b) {
      if (!cross_ok || !g.clifford()) return false;
      continue;
    }
    if (!parts_[b]->allowed({localized(g, plain_off_[b])})) return false;
  }
  return true;
}

GateList ComposedScheme::lift(const GateList& c) const {
  if (!allowed(c)) throw NotAllowed("computation not allowed by composed scheme");
  GateList out;
  for (const auto& g : c) {
    const std::size_t b = block_of(g.q0);
    if (g.two_qubit() && block_of(g.q1) != b) {
      out.push_back(g);  // pauli-frame components are in place
      continue;
    }
    for (const auto& lg : parts_[b]->lift({localized(g, plain_off_[b])})) out.push_back(shifted(lg, cipher_off_[b]));
  }
  return out;
}

std::optional<PauliString> ComposedScheme::key_pauli(Key key) const {
  if (!pauli_frame()) return std::nullopt;
  const auto keys = split_key(key);
  PauliString out(0);
  for (std::size_t i = 0; i < parts_.size(); ++i) out = out.tensor(*parts_[i]->key_pauli(keys[i]));
  return out;
}

std::optional<Key> ComposedScheme::key_from_pauli(const PauliString& p) const {
  if (!pauli_frame() || p.size() != plain_) return std::nullopt;
  std::vector<Key> keys;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    auto k = parts_[i]->key_from_pauli(p.restrict_to(iota(parts_[i]->plain_qubits(), plain_off_[i])));
    if (!k) return std::nullopt;
    keys.push_back(*k);
  }
  return join_key(keys);
}

Key ComposedScheme::key_transport(Key key, const GateList& c) const {
  if (!allowed(c)) throw NotAllowed("computation not allowed by composed scheme");
  if (pauli_frame()) {
    auto k = key_from_pauli(backward(*key_pauli(key), c));
    if (!k) throw NotAllowed("transported key leaves the product key set");
    return *k;
  }
  auto keys = split_key(key);
  // Encr_k o C2 o C1 = lift(C2) o Encr_{f(k,C2)} o C1: peel gates from the end.
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    const std::size_t b = block_of(it->q0);
    keys[b] = parts_[b]->key_transport(keys[b], {localized(*it, plain_off_[b])});
  }
  return join_key(keys);
}

bool ComposedScheme::transported_key_factorizes(Key key, const GateList& c) const {
  if (!pauli_frame()) return true;
  return key_from_pauli(backward(*key_pauli(key), c)).has_value();
}

DecryptionProgram ComposedScheme::decryption(Key key, const GateList& c) const {
  if (!allowed(c)) throw NotAllowed("computation not allowed by composed scheme");
  if (pauli_frame()) {
    // gamma = identity: the frame is undone as a whole-register Pauli even
    // when it does not factorise.
    return {pauli_gates(forward(*key_pauli(key), c)), iota(plain_)};
  }
  const auto keys = split_key(key);
  std::vector<GateList> local(parts_.size());
  for (const auto& g : c) {
    const std::size_t b = block_of(g.q0);
    local[b].push_back(localized(g, plain_off_[b]));
  }
  DecryptionProgram out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto d = parts_[i]->decryption(keys[i], local[i]);
    for (const auto& g : d.gates) out.gates.push_back(shifted(g, cipher_off_[i]));
    for (std::size_t k : d.keep) out.keep.push_back(k + cipher_off_[i]);
  }
  return out;
}

SchemePtr compose_schemes(const std::vector<SchemePtr>& parts) {
  if (parts.size() == 1) return parts.front();
  return std::make_shared<ComposedScheme>(parts);
}

// ---------------------------------------------------------------- channels

DensityMatrix encrypt(const Scheme& s, Key key, const DensityMatrix& plain) {
  if (plain.n_qubits() != s.plain_qubits()) throw SizeMismatch("encrypt: plaintext size mismatch");
  const auto prog = s.encryption(key);
  const std::size_t anc = prog.cipher_qubits - prog.data_positions.size();
  DensityMatrix out = anc ? plain.tensor(DensityMatrix::maximally_mixed(anc)) : plain;
  if (anc) out = out.permuted(placement_order(prog));
  out.apply_gates(prog.gates);
  return out;
}

StabilizerState encrypt(const Scheme& s, Key key, const StabilizerState& plain) {
  if (plain.n_qubits() != s.plain_qubits()) throw SizeMismatch("encrypt: plaintext size mismatch");
  const auto prog = s.encryption(key);
  const std::size_t anc = prog.cipher_qubits - prog.data_positions.size();
  StabilizerState out = anc ? plain.tensor(StabilizerState::maximally_mixed(anc)) : plain;
  if (anc) out = out.reduced(placement_order(prog));
  out.apply_gates(prog.gates);
  return out;
}

DensityMatrix decrypt(const DecryptionProgram& d, DensityMatrix cipher) {
  cipher.apply_gates(d.gates);
  if (d.keep.size() == cipher.n_qubits() && d.keep == iota(d.keep.size())) return cipher;
  return cipher.reduced(d.keep);
}

StabilizerState decrypt(const DecryptionProgram& d, StabilizerState cipher) {
  cipher.apply_gates(d.gates);
  if (d.keep.size() == cipher.n_qubits() && d.keep == iota(d.keep.size())) return cipher;
  return cipher.reduced(d.keep);
}

DecryptionProgram derive_decryption(const Scheme& s, Key key, const GateList& computation) {
  if (!s.allowed(computation)) throw NotAllowed("computation outside the allowed set");
  return s.decryption(key, computation);
}

DensityMatrix round_trip(const Scheme& s, Key key, const GateList& computation, const DensityMatrix& plain) {
  const auto dec = derive_decryption(s, key, computation);
  DensityMatrix c = encrypt(s, key, plain);
  c.apply_gates(s.lift(computation));
  return decrypt(dec, std::move(c));
}

DensityMatrix ciphertext_average(const Scheme& s, const DensityMatrix& plain, unsigned jobs) {
  const Key total = s.key_count();
  if (total > kExactSweepLimit) throw std::invalid_argument("key space too large to enumerate");
  constexpr Key kChunk = 64;
  const Key chunks = (total + kChunk - 1) / kChunk;
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << s.cipher_qubits());
  if (s.cipher_qubits() > kDenseMaxQubits) throw OracleCapExceeded(s.cipher_qubits());
  std::vector<Matrix> partial(chunks, Matrix::Zero(d, d));
  std::atomic<Key> next{0};
  auto worker = [&]() {
    for (Key c = next++; c < chunks; c = next++) {
      const Key end = std::min(total, (c + 1) * kChunk);
      for (Key k = c * kChunk; k < end; ++k) partial[c] += encrypt(s, k, plain).matrix();
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<Key>(jobs, chunks));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& m : partial) sum += m;
  return DensityMatrix(s.cipher_qubits(), sum / static_cast<double>(total));
}

std::string SecurityReport::to_json() const {
  return nlohmann::json{{"delta", delta},
                        {"method", method},
                        {"key_count", key_count},
                        {"samples", samples},
                        {"witness_pair", {witness_a, witness_b}}}
      .dump();
}

SecurityReport security_delta(const Scheme& s, const std::vector<DensityMatrix>& inputs, unsigned jobs,
                              std::size_t samples, std::uint64_t seed) {
  if (inputs.empty()) throw std::invalid_argument("security_delta needs at least one input");
  SecurityReport rep;
  rep.key_count = s.key_count();
  std::vector<DensityMatrix> avg;
  if (rep.key_count <= kExactSweepLimit) {
    rep.method = "exact-sweep";
    rep.samples = rep.key_count;
    for (const auto& in : inputs) avg.push_back(ciphertext_average(s, in, jobs));
  } else {
    rep.method = "sampled";
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Key> pick(0, rep.key_count - 1);
    std::vector<Key> keys(samples);
    for (auto& k : keys) k = pick(rng);
    for (const auto& in : inputs) {
      Matrix sum = Matrix::Zero(1 << s.cipher_qubits(), 1 << s.cipher_qubits());
      for (Key k : keys) sum += encrypt(s, k, in).matrix();
      avg.emplace_back(s.cipher_qubits(), sum / static_cast<double>(samples));
    }
  }
  for (std::size_t i = 0; i < avg.size(); ++i) {
    for (std::size_t j = i + 1; j < avg.size(); ++j) {
      const double t = trace_distance(avg[i], avg[j]);
      if (t > rep.delta) {
        rep.delta = t;
        rep.witness_a = i;
        rep.witness_b = j;
      }
    }
  }
  rep.delta = std::clamp(rep.delta, 0.0, 1.0);
  return rep;
}

// ---------------------------------------------------------------- lemma 2

QecCommutation check_qec_commutation(const Scheme& s, const GateList& enc, const GateList& computation, Key key) {
  if (!s.allowed(enc)) throw NotAllowed("encoder is not in the allowed set");
  if (!s.allowed(computation)) throw NotAllowed("computation is not in the allowed set");
  const std::size_t n = s.plain_qubits();
  check_gates_in_range(enc, n);

  QecCommutation out;
  const GateList enc_inv = inverse_gates(enc);
  out.lambda = s.key_transport(key, enc_inv);
  out.lambda_sharp = s.key_transport(key, enc);
  const GateList lifted = s.lift(enc);

  auto plain_enc = [&](DensityMatrix rho) {
    rho.apply_gates(enc);
    return rho;
  };
  auto cipher_enc = [&](DensityMatrix rho) {
    rho.apply_gates(lifted);
    return rho;
  };
  // lift(Enc) o Encr_key == Encr_lambda o Enc
  out.enc_after_encr = channel_deviation(
      n, [&](const DensityMatrix& r) { return cipher_enc(encrypt(s, key, r)); },
      [&](const DensityMatrix& r) { return encrypt(s, out.lambda, plain_enc(r)); });
  // Encr_key o Enc == lift(Enc) o Encr_lambda_sharp
  out.encr_after_enc = channel_deviation(
      n, [&](const DensityMatrix& r) { return encrypt(s, key, plain_enc(r)); },
      [&](const DensityMatrix& r) { return cipher_enc(encrypt(s, out.lambda_sharp, r)); });

  // L(C) = Enc o C o Enc^-1 as a gate list (Enc^-1 runs first).
  GateList logical = enc_inv;
  logical.insert(logical.end(), computation.begin(), computation.end());
  logical.insert(logical.end(), enc.begin(), enc.end());
  const Key lhs = s.key_transport(s.key_transport(key, logical), enc);
  const Key rhs = s.key_transport(out.lambda_sharp, computation);
  out.key_relation = lhs == rhs;
  out.holds = out.enc_after_encr < 1e-10 && out.encr_after_enc < 1e-10 && out.key_relation;
  return out;
}

}  // namespace qhe
