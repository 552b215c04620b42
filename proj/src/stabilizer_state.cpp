// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/stabilizer_state.hpp"

#include <algorithm>

#include <json.hpp>

namespace qhe {

namespace {

// Column c < n is the x bit of qubit c, otherwise the z bit of qubit c - n.
bool bit_at(const PauliString& p, std::size_t c) {
  const std::size_t n = p.size();
  return c < n ? p.x(c) : p.z(c - n);
}

struct Echelon {
  std::vector<PauliString> rows;
  std::vector<std::size_t> pivots;
};

// Gaussian elimination over the given column order. With `full`, pivot
// columns are cleared above as well as below.
Echelon row_reduce(std::vector<PauliString> rows, const std::vector<std::size_t>& cols, bool full) {
  Echelon e;
  std::size_t next = 0;
  for (std::size_t c : cols) {
    std::size_t r = next;
    while (r < rows.size() && !bit_at(rows[r], c)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[next], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == next || (!full && i < next)) continue;
      if (bit_at(rows[i], c)) rows[i] *= rows[next];
    }
    e.pivots.push_back(c);
    ++next;
  }
  rows.resize(next);
  e.rows = std::move(rows);
  return e;
}

std::vector<std::size_t> natural_cols(std::size_t n) {
  std::vector<std::size_t> cols(2 * n);
  for (std::size_t c = 0; c < 2 * n; ++c) cols[c] = c;
  return cols;
}

void flip_sign(PauliString& p) { p.set_phase(static_cast<Phase>(p.phase() + 2)); }

}  // namespace

StabilizerState StabilizerState::zero_state(std::size_t n) {
  StabilizerState s;
  s.n_ = n;
  for (std::size_t q = 0; q < n; ++q) s.gens_.push_back(PauliString::single(n, q, 'Z'));
  return s;
}

StabilizerState StabilizerState::maximally_mixed(std::size_t n) {
  StabilizerState s;
  s.n_ = n;
  return s;
}

StabilizerState StabilizerState::from_generators(std::size_t n, std::vector<PauliString> gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != n) throw SizeMismatch("generator size mismatch");
    if (!gens[i].is_hermitian()) throw std::invalid_argument("generator must be Hermitian");
    for (std::size_t j = 0; j < i; ++j) {
      if (!gens[i].commutes(gens[j])) throw std::invalid_argument("generators must commute");
    }
  }
  if (row_reduce(gens, natural_cols(n), false).rows.size() != gens.size()) {
    throw std::invalid_argument("generators are not independent");
  }
  StabilizerState s;
  s.n_ = n;
  s.gens_ = std::move(gens);
  return s;
}

void StabilizerState::apply_gate(const Gate& g) {
  for (auto& p : gens_) conjugate_by_gate(p, g);
}

void StabilizerState::apply_gates(const std::vector<Gate>& gates) {
  for (const auto& g : gates) apply_gate(g);
}

void StabilizerState::apply_clifford(const CliffordOp& c) {
  if (c.n_qubits() != n_) throw SizeMismatch("apply_clifford: size mismatch");
  for (auto& p : gens_) p = c.conjugate(p);
}

void StabilizerState::apply_pauli(const PauliString& p) {
  if (p.size() != n_) throw SizeMismatch("apply_pauli: size mismatch");
  for (auto& g : gens_) {
    if (!g.commutes(p)) flip_sign(g);
  }
}

std::optional<int> StabilizerState::eigenvalue(const PauliString& p) const {
  if (p.size() != n_) throw SizeMismatch("eigenvalue: size mismatch");
  for (const auto& g : gens_) {
    if (!g.commutes(p)) return std::nullopt;
  }
  const Echelon e = row_reduce(gens_, natural_cols(n_), true);
  PauliString residual = p.unsigned_copy();
  PauliString acc(n_);
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (bit_at(residual, e.pivots[i])) {
      residual *= e.rows[i];
      acc *= e.rows[i];
    }
  }
  if (!residual.is_identity()) return std::nullopt;
  // acc = i^k |p| with acc in the group; p = i^(p.phase) |p|.
  const unsigned diff = (p.phase() + 4u - acc.phase()) & 3u;
  if (diff & 1u) throw std::logic_error("non-Hermitian element in stabilizer group");
  return diff == 0 ? 1 : -1;
}

MeasurementRecord StabilizerState::measure_pauli(const PauliString& p, std::mt19937_64& rng, std::string label,
                                                 std::optional<int> forced) {
  if (p.size() != n_) throw SizeMismatch("measure_pauli: size mismatch");
  if (!p.is_hermitian()) throw std::invalid_argument("measured Pauli must be Hermitian");
  if (forced && *forced != 0 && *forced != 1) throw std::invalid_argument("forced outcome must be 0 or 1");

  auto random_bit = [&]() { return forced ? *forced : static_cast<int>(rng() & 1u); };

  std::size_t anti = gens_.size();
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!gens_[i].commutes(p)) {
      anti = i;
      break;
    }
  }
  if (anti < gens_.size()) {
    for (std::size_t i = anti + 1; i < gens_.size(); ++i) {
      if (!gens_[i].commutes(p)) gens_[i] *= gens_[anti];
    }
    const int outcome = random_bit();
    gens_[anti] = p;
    if (outcome) flip_sign(gens_[anti]);
    return {std::move(label), outcome, 0.5};
  }

  if (auto ev = eigenvalue(p)) {
    const int outcome = *ev == 1 ? 0 : 1;
    if (forced && *forced != outcome) throw ZeroProbabilityOutcome("projection onto a zero-probability outcome");
    return {std::move(label), outcome, 1.0};
  }

  // p commutes with everything but is independent: the mixed part is measured.
  const int outcome = random_bit();
  PauliString g = p;
  if (outcome) flip_sign(g);
  gens_.push_back(std::move(g));
  return {std::move(label), outcome, 0.5};
}

StabilizerState StabilizerState::tensor(const StabilizerState& other) const {
  StabilizerState s;
  s.n_ = n_ + other.n_;
  const PauliString id_a(n_), id_b(other.n_);
  for (const auto& g : gens_) s.gens_.push_back(g.tensor(id_b));
  for (const auto& g : other.gens_) s.gens_.push_back(id_a.tensor(g));
  return s;
}

StabilizerState StabilizerState::reduced(const std::vector<std::size_t>& keep) const {
  std::vector<bool> kept(n_, false);
  for (std::size_t q : keep) {
    if (q >= n_ || kept[q]) throw std::invalid_argument("reduced: bad qubit list");
    kept[q] = true;
  }
  // Eliminate on the traced qubits first; the rows left without a pivot
  // there generate the subgroup supported on `keep`.
  std::vector<std::size_t> cols;
  for (std::size_t q = 0; q < n_; ++q) {
    if (!kept[q]) {
      cols.push_back(q);
      cols.push_back(n_ + q);
    }
  }
  const std::size_t traced_cols = cols.size();
  for (std::size_t q = 0; q < n_; ++q) {
    if (kept[q]) {
      cols.push_back(q);
      cols.push_back(n_ + q);
    }
  }
  const Echelon e = row_reduce(gens_, cols, false);
  StabilizerState s;
  s.n_ = keep.size();
  const std::vector<std::size_t> traced(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(traced_cols));
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (std::find(traced.begin(), traced.end(), e.pivots[i]) != traced.end()) continue;
    s.gens_.push_back(e.rows[i].restrict_to(keep));
  }
  return s;
}

std::vector<PauliString> StabilizerState::canonical_generators() const {
  return row_reduce(gens_, natural_cols(n_), true).rows;
}

bool StabilizerState::same_state(const StabilizerState& other) const {
  return n_ == other.n_ && canonical_generators() == other.canonical_generators();
}

DensityMatrix StabilizerState::to_density() const {
  if (n_ > kDenseMaxQubits) throw OracleCapExceeded(n_);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_);
  Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
  for (const auto& g : gens_) rho = (rho + rho * pauli_matrix(g)).eval();
  return DensityMatrix(n_, std::move(rho));
}

DensityMatrix to_density(const StabilizerState& s) { return s.to_density(); }

std::string StabilizerState::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : gens_) gens.push_back(g.str());
  return nlohmann::json{{"n", n_}, {"generators", gens}}.dump();
}

}  // namespace qhe
