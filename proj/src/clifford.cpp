// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/clifford.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace qhe {

namespace {

void flip_sign(PauliString& p) { p.set_phase(static_cast<Phase>(p.phase() + 2)); }

void conj_h(PauliString& p, std::size_t q) {
  const bool x = p.x(q), z = p.z(q);
  if (x && z) flip_sign(p);
  p.set_x(q, z);
  p.set_z(q, x);
}

void conj_s(PauliString& p, std::size_t q) {
  const bool x = p.x(q), z = p.z(q);
  if (x && z) flip_sign(p);
  p.set_z(q, z ^ x);
}

void conj_cnot(PauliString& p, std::size_t c, std::size_t t) {
  const bool xc = p.x(c), zc = p.z(c), xt = p.x(t), zt = p.z(t);
  if (xc && zt && !(xt ^ zc)) flip_sign(p);
  p.set_x(t, xt ^ xc);
  p.set_z(c, zc ^ zt);
}

void check_range(const PauliString& p, const Gate& g) {
  if (g.q0 >= p.size() || (g.two_qubit() && g.q1 >= p.size())) {
    throw std::out_of_range("gate qubit outside register");
  }
}

}  // namespace

void conjugate_by_gate(PauliString& p, const Gate& g) {
  check_range(p, g);
  const std::size_t a = g.q0, b = g.q1;
  switch (g.kind) {
    case GateKind::H: conj_h(p, a); break;
    case GateKind::S: conj_s(p, a); break;
    case GateKind::X: if (p.z(a)) flip_sign(p); break;
    case GateKind::Z: if (p.x(a)) flip_sign(p); break;
    case GateKind::Y: if (p.x(a) ^ p.z(a)) flip_sign(p); break;
    case GateKind::CNOT: conj_cnot(p, a, b); break;
    case GateKind::CZ:
      conj_h(p, b);
      conj_cnot(p, a, b);
      conj_h(p, b);
      break;
    case GateKind::SWAP: {
      const bool xa = p.x(a), za = p.z(a);
      p.set_x(a, p.x(b));
      p.set_z(a, p.z(b));
      p.set_x(b, xa);
      p.set_z(b, za);
      break;
    }
    case GateKind::T:
    case GateKind::TDG:
      throw std::invalid_argument("T is not a Clifford gate");
  }
}

CliffordOp CliffordOp::identity(std::size_t n) {
  CliffordOp c;
  c.n_ = n;
  c.x_images_.reserve(n);
  c.z_images_.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    c.x_images_.push_back(PauliString::single(n, q, 'X'));
    c.z_images_.push_back(PauliString::single(n, q, 'Z'));
  }
  return c;
}

CliffordOp CliffordOp::from_gates(std::size_t n, const std::vector<Gate>& gates) {
  CliffordOp c = identity(n);
  c.append(gates);
  return c;
}

CliffordOp CliffordOp::from_circuit(const Circuit& circ) {
  return from_gates(circ.n_qubits(), circ.clifford_gates());
}

void CliffordOp::append(const Gate& g) {
  if (!g.clifford()) throw std::invalid_argument("T is not a Clifford gate");
  for (auto& p : x_images_) conjugate_by_gate(p, g);
  for (auto& p : z_images_) conjugate_by_gate(p, g);
  gates_.push_back(g);
}

void CliffordOp::append(const std::vector<Gate>& gs) {
  for (const auto& g : gs) append(g);
}

PauliString CliffordOp::conjugate(const PauliString& p) const {
  if (p.size() != n_) throw SizeMismatch("conjugate: Pauli and Clifford sizes differ");
  PauliString out(n_);
  unsigned extra = 0;
  for (std::size_t q = 0; q < n_; ++q) {
    const bool x = p.x(q), z = p.z(q);
    if (x) out *= x_images_[q];
    if (z) out *= z_images_[q];
    if (x && z) ++extra;  // Y = i X Z
  }
  out.set_phase(static_cast<Phase>(out.phase() + p.phase() + extra));
  return out;
}

PauliString conjugate(const CliffordOp& c, const PauliString& p) { return c.conjugate(p); }

CliffordOp CliffordOp::inverse() const { return from_gates(n_, inverse_gates(gates_)); }

bool CliffordOp::is_valid_symplectic() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (!x_images_[i].is_hermitian() || !z_images_[i].is_hermitian()) return false;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!x_images_[i].commutes(x_images_[j])) return false;
      if (!z_images_[i].commutes(z_images_[j])) return false;
      if (x_images_[i].commutes(z_images_[j]) != (i != j)) return false;
    }
  }
  return true;
}

bool CliffordOp::same_action(const CliffordOp& other) const {
  return n_ == other.n_ && x_images_ == other.x_images_ && z_images_ == other.z_images_;
}

CliffordOp compose(const CliffordOp& c2, const CliffordOp& c1) {
  if (c1.n_qubits() != c2.n_qubits()) throw SizeMismatch("compose: qubit counts differ");
  std::vector<Gate> gates = c1.gates();
  gates.insert(gates.end(), c2.gates().begin(), c2.gates().end());
  return CliffordOp::from_gates(c1.n_qubits(), gates);
}

CliffordOp embed(const CliffordOp& c, std::size_t n_total, const std::vector<std::size_t>& positions) {
  if (positions.size() != c.n_qubits()) throw SizeMismatch("embed: position count mismatch");
  std::vector<Gate> gates;
  gates.reserve(c.gates().size());
  for (Gate g : c.gates()) {
    g.q0 = positions[g.q0];
    if (g.two_qubit()) g.q1 = positions[g.q1];
    gates.push_back(g);
  }
  return CliffordOp::from_gates(n_total, gates);
}

std::vector<Gate> gates_reducing_pair(const PauliString& p_in, const PauliString& q_in, std::size_t pivot,
                                      const std::vector<std::size_t>& active) {
  if (p_in.commutes(q_in)) throw std::invalid_argument("pair must anticommute");
  PauliString p = p_in;
  PauliString q = q_in;
  std::vector<Gate> out;
  auto emit = [&](Gate g) {
    conjugate_by_gate(p, g);
    conjugate_by_gate(q, g);
    out.push_back(g);
  };

  // p -> X-type on its support.
  for (std::size_t j : active) {
    if (p.z(j)) emit({p.x(j) ? GateKind::S : GateKind::H, j, 0});
  }
  if (!p.x(pivot)) {
    auto it = std::find_if(active.begin(), active.end(), [&](std::size_t j) { return p.x(j); });
    emit({GateKind::SWAP, pivot, *it});
  }
  for (std::size_t j : active) {
    if (j != pivot && p.x(j)) emit({GateKind::CNOT, pivot, j});
  }

  // q -> Z on the pivot while keeping p = X_pivot.
  if (q.x(pivot)) {
    emit({GateKind::H, pivot, 0});
    emit({GateKind::S, pivot, 0});
    emit({GateKind::H, pivot, 0});
  }
  for (std::size_t j : active) {
    if (j == pivot || (!q.x(j) && !q.z(j))) continue;
    if (q.x(j) && q.z(j)) emit({GateKind::S, j, 0});
    if (q.x(j)) emit({GateKind::H, j, 0});
    emit({GateKind::CNOT, j, pivot});
  }
  return out;
}

CliffordOp CliffordOp::from_images(const std::vector<PauliString>& x_images,
                                   const std::vector<PauliString>& z_images) {
  const std::size_t n = x_images.size();
  if (z_images.size() != n) throw SizeMismatch("from_images: image count mismatch");
  std::vector<PauliString> wx = x_images;
  std::vector<PauliString> wz = z_images;
  for (const auto& p : wx) {
    if (p.size() != n || !p.is_hermitian()) throw std::invalid_argument("from_images: bad X image");
  }
  for (const auto& p : wz) {
    if (p.size() != n || !p.is_hermitian()) throw std::invalid_argument("from_images: bad Z image");
  }

  std::vector<Gate> reduce;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> active;
    for (std::size_t j = k; j < n; ++j) active.push_back(j);
    for (std::size_t j = 0; j < k; ++j) {
      if (wx[k].x(j) || wx[k].z(j) || wz[k].x(j) || wz[k].z(j)) {
        throw std::invalid_argument("from_images: images are not a symplectic basis");
      }
    }
    auto gs = gates_reducing_pair(wx[k], wz[k], k, active);
    for (const auto& g : gs) {
      for (auto& p : wx) conjugate_by_gate(p, g);
      for (auto& p : wz) conjugate_by_gate(p, g);
    }
    reduce.insert(reduce.end(), gs.begin(), gs.end());
  }

  // reduce o U is now a Pauli: fix the remaining signs first, then undo reduce.
  std::vector<Gate> gates;
  for (std::size_t k = 0; k < n; ++k) {
    const bool flip_x = wx[k].phase() == 2;
    const bool flip_z = wz[k].phase() == 2;
    if (flip_x && flip_z) {
      gates.push_back({GateKind::Y, k, 0});
    } else if (flip_x) {
      gates.push_back({GateKind::Z, k, 0});
    } else if (flip_z) {
      gates.push_back({GateKind::X, k, 0});
    }
  }
  auto undo = inverse_gates(reduce);
  gates.insert(gates.end(), undo.begin(), undo.end());
  CliffordOp out = from_gates(n, gates);
  if (out.x_images_ != x_images || out.z_images_ != z_images) {
    throw std::logic_error("from_images: synthesis did not reproduce the tableau");
  }
  return out;
}

CliffordOp random_clifford(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_clifford: n must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> letter(0, 3);
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

  auto random_pauli = [&](std::size_t k) {
    PauliString p(n);
    for (std::size_t j = k; j < n; ++j) p.set_letter(j, kLetters[letter(rng)]);
    return p;
  };

  std::vector<std::vector<Gate>> stages;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> active;
    for (std::size_t j = k; j < n; ++j) active.push_back(j);
    PauliString p = random_pauli(k);
    while (p.is_identity()) p = random_pauli(k);
    PauliString q = random_pauli(k);
    while (q.commutes(p)) q = random_pauli(k);
    stages.push_back(inverse_gates(gates_reducing_pair(p, q, k, active)));
  }

  std::vector<Gate> gates;
  for (std::size_t q = 0; q < n; ++q) {
    const int l = letter(rng);
    if (l == 1) gates.push_back({GateKind::X, q, 0});
    if (l == 2) gates.push_back({GateKind::Y, q, 0});
    if (l == 3) gates.push_back({GateKind::Z, q, 0});
  }
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    gates.insert(gates.end(), it->begin(), it->end());
  }
  return CliffordOp::from_gates(n, gates);
}

}  // namespace qhe
