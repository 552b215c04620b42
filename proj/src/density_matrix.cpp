// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/density_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace qhe {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_cap(std::size_t n) {
  if (n > kDenseMaxQubits) throw OracleCapExceeded(n);
}

std::size_t mask_of(std::size_t n, std::size_t q) { return std::size_t{1} << (n - 1 - q); }

Eigen::Matrix2cd one_qubit_matrix(GateKind kind) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd u;
  switch (kind) {
    case GateKind::H: u << r, r, r, -r; break;
    case GateKind::S: u << 1, 0, 0, kI; break;
    case GateKind::X: u << 0, 1, 1, 0; break;
    case GateKind::Y: u << 0, -kI, kI, 0; break;
    case GateKind::Z: u << 1, 0, 0, -1; break;
    case GateKind::T: u << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4); break;
    case GateKind::TDG: u << 1, 0, 0, std::polar(1.0, -std::numbers::pi / 4); break;
    default: throw std::logic_error("not a one-qubit gate");
  }
  return u;
}

Eigen::Matrix4cd two_qubit_matrix(GateKind kind) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  switch (kind) {
    case GateKind::CNOT:
      u(0, 0) = u(1, 1) = 1;
      u(2, 3) = u(3, 2) = 1;
      break;
    case GateKind::CZ:
      u(0, 0) = u(1, 1) = u(2, 2) = 1;
      u(3, 3) = -1;
      break;
    case GateKind::SWAP:
      u(0, 0) = u(3, 3) = 1;
      u(1, 2) = u(2, 1) = 1;
      break;
    default: throw std::logic_error("not a two-qubit gate");
  }
  return u;
}

// M <- u M on qubit q.
void left_1q(Matrix& m, std::size_t n, const Eigen::Matrix2cd& u, std::size_t q) {
  const std::size_t bit = mask_of(n, q);
  for (std::size_t i = 0; i < static_cast<std::size_t>(m.rows()); ++i) {
    if (i & bit) continue;
    const Eigen::RowVectorXcd r0 = m.row(i);
    const Eigen::RowVectorXcd r1 = m.row(i | bit);
    m.row(i) = u(0, 0) * r0 + u(0, 1) * r1;
    m.row(i | bit) = u(1, 0) * r0 + u(1, 1) * r1;
  }
}

// M <- M u^dagger on qubit q.
void right_1q_dag(Matrix& m, std::size_t n, const Eigen::Matrix2cd& u, std::size_t q) {
  const std::size_t bit = mask_of(n, q);
  for (std::size_t j = 0; j < static_cast<std::size_t>(m.cols()); ++j) {
    if (j & bit) continue;
    const Eigen::VectorXcd c0 = m.col(j);
    const Eigen::VectorXcd c1 = m.col(j | bit);
    m.col(j) = std::conj(u(0, 0)) * c0 + std::conj(u(0, 1)) * c1;
    m.col(j | bit) = std::conj(u(1, 0)) * c0 + std::conj(u(1, 1)) * c1;
  }
}

void left_2q(Matrix& m, std::size_t n, const Eigen::Matrix4cd& u, std::size_t a, std::size_t b) {
  const std::size_t ba = mask_of(n, a), bb = mask_of(n, b);
  const std::size_t idx[4] = {0, bb, ba, ba | bb};
  for (std::size_t i = 0; i < static_cast<std::size_t>(m.rows()); ++i) {
    if (i & (ba | bb)) continue;
    Eigen::Matrix<Complex, 4, Eigen::Dynamic> rows(4, m.cols());
    for (int k = 0; k < 4; ++k) rows.row(k) = m.row(i | idx[k]);
    const auto out = (u * rows).eval();
    for (int k = 0; k < 4; ++k) m.row(i | idx[k]) = out.row(k);
  }
}

void right_2q_dag(Matrix& m, std::size_t n, const Eigen::Matrix4cd& u, std::size_t a, std::size_t b) {
  const std::size_t ba = mask_of(n, a), bb = mask_of(n, b);
  const std::size_t idx[4] = {0, bb, ba, ba | bb};
  const Eigen::Matrix4cd ud = u.adjoint();
  for (std::size_t j = 0; j < static_cast<std::size_t>(m.cols()); ++j) {
    if (j & (ba | bb)) continue;
    Eigen::Matrix<Complex, Eigen::Dynamic, 4> cols(m.rows(), 4);
    for (int k = 0; k < 4; ++k) cols.col(k) = m.col(j | idx[k]);
    const auto out = (cols * ud).eval();
    for (int k = 0; k < 4; ++k) m.col(j | idx[k]) = out.col(k);
  }
}

void left_gate(Matrix& m, std::size_t n, const Gate& g) {
  if (g.q0 >= n || (g.two_qubit() && g.q1 >= n)) throw std::out_of_range("gate qubit outside register");
  if (g.two_qubit()) {
    left_2q(m, n, two_qubit_matrix(g.kind), g.q0, g.q1);
  } else {
    left_1q(m, n, one_qubit_matrix(g.kind), g.q0);
  }
}

// z * i^k without a general complex product.
Complex times_i_pow(unsigned k, Complex z) {
  switch (k & 3u) {
    case 0: return z;
    case 1: return {-z.imag(), z.real()};
    case 2: return -z;
    default: return {z.imag(), -z.real()};
  }
}

// Every gate but H sends basis states to phased basis states, so
// U rho U^dagger is a single relabelling pass.
void apply_monomial(Matrix& rho, std::size_t n, const Gate& g) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::size_t> to(dim);
  std::vector<Complex> ph(dim);
  auto image = [](const auto& u, int v) {
    int w = 0;
    while (u(w, v) == Complex(0.0)) ++w;
    return w;
  };
  if (g.two_qubit()) {
    const Eigen::Matrix4cd u = two_qubit_matrix(g.kind);
    const std::size_t ba = mask_of(n, g.q0), bb = mask_of(n, g.q1);
    for (std::size_t b = 0; b < dim; ++b) {
      const int v = ((b & ba) ? 2 : 0) | ((b & bb) ? 1 : 0);
      const int w = image(u, v);
      to[b] = (b & ~(ba | bb)) | ((w & 2) ? ba : 0) | ((w & 1) ? bb : 0);
      ph[b] = u(w, v);
    }
  } else {
    const Eigen::Matrix2cd u = one_qubit_matrix(g.kind);
    const std::size_t bit = mask_of(n, g.q0);
    for (std::size_t b = 0; b < dim; ++b) {
      const int v = (b & bit) ? 1 : 0;
      const int w = image(u, v);
      to[b] = (b & ~bit) | (w ? bit : 0);
      ph[b] = u(w, v);
    }
  }
  Matrix out(rho.rows(), rho.cols());
  for (std::size_t c = 0; c < dim; ++c) {
    const Complex pc = std::conj(ph[c]);
    const auto tc = static_cast<Eigen::Index>(to[c]);
    for (std::size_t r = 0; r < dim; ++r) {
      out(static_cast<Eigen::Index>(to[r]), tc) = ph[r] * pc * rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  rho = std::move(out);
}

// P|b> = coeff(b) |b ^ xmask>.
struct PauliAction {
  std::size_t xmask = 0;
  std::size_t zmask = 0;
  unsigned base = 0;  // coeff(b) = i^(base + 2 parity(b & zmask))

  explicit PauliAction(const PauliString& p) {
    const std::size_t n = p.size();
    unsigned ys = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (p.x(q)) xmask |= mask_of(n, q);
      if (p.z(q)) zmask |= mask_of(n, q);
      if (p.x(q) && p.z(q)) ++ys;
    }
    base = (p.phase() + ys) & 3u;
  }
  unsigned power(std::size_t b) const { return (base + 2u * (std::popcount(b & zmask) & 1u)) & 3u; }
  Complex coeff(std::size_t b) const { return times_i_pow(power(b), Complex(1.0)); }
};

// P M
Matrix pauli_left(const PauliAction& a, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  const auto d = static_cast<std::size_t>(m.rows());
  for (std::size_t c = 0; c < d; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    for (std::size_t b = 0; b < d; ++b) {
      out(static_cast<Eigen::Index>(b ^ a.xmask), ci) = times_i_pow(a.power(b), m(static_cast<Eigen::Index>(b), ci));
    }
  }
  return out;
}

// M P
Matrix pauli_right(const PauliAction& a, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t b = 0; b < static_cast<std::size_t>(m.cols()); ++b) {
    out.col(static_cast<Eigen::Index>(b)) = a.coeff(b) * m.col(static_cast<Eigen::Index>(b ^ a.xmask));
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t n_qubits, Matrix rho) : n_(n_qubits), rho_(std::move(rho)) {
  check_cap(n_);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_);
  if (rho_.rows() != d || rho_.cols() != d) throw SizeMismatch("density matrix dimension mismatch");
}

DensityMatrix DensityMatrix::zero_state(std::size_t n) { return basis_state(n, 0); }

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
  check_cap(n);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  return DensityMatrix(n, Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(std::size_t n, std::uint64_t index) {
  check_cap(n);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  if (static_cast<Eigen::Index>(index) >= d) throw std::out_of_range("basis index outside register");
  Matrix m = Matrix::Zero(d, d);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::pure(std::size_t n, const Vector& psi) {
  check_cap(n);
  const double norm = psi.norm();
  if (norm == 0.0) throw std::invalid_argument("zero state vector");
  const Vector v = psi / norm;
  return DensityMatrix(n, v * v.adjoint());
}

DensityMatrix DensityMatrix::named(const std::string& name) {
  const double r = 1.0 / std::numbers::sqrt2;
  Vector v(2);
  if (name == "0") {
    v << 1, 0;
  } else if (name == "1") {
    v << 0, 1;
  } else if (name == "+") {
    v << r, r;
  } else if (name == "-") {
    v << r, -r;
  } else if (name == "+i") {
    v << r, r * kI;
  } else if (name == "-i") {
    v << r, -r * kI;
  } else if (name == "T") {
    v << r, r * std::polar(1.0, std::numbers::pi / 4);
  } else {
    throw std::invalid_argument("unknown state name '" + name + "'");
  }
  return pure(1, v);
}

void DensityMatrix::apply_1q(const Eigen::Matrix2cd& u, std::size_t q) {
  left_1q(rho_, n_, u, q);
  right_1q_dag(rho_, n_, u, q);
}

void DensityMatrix::apply_2q(const Eigen::Matrix4cd& u, std::size_t a, std::size_t b) {
  left_2q(rho_, n_, u, a, b);
  right_2q_dag(rho_, n_, u, a, b);
}

void DensityMatrix::apply_gate(const Gate& g) {
  if (g.q0 >= n_ || (g.two_qubit() && g.q1 >= n_)) throw std::out_of_range("gate qubit outside register");
  if (g.kind != GateKind::H) {
    apply_monomial(rho_, n_, g);
  } else if (g.two_qubit()) {
    apply_2q(two_qubit_matrix(g.kind), g.q0, g.q1);
  } else {
    apply_1q(one_qubit_matrix(g.kind), g.q0);
  }
}

void DensityMatrix::apply_gates(const std::vector<Gate>& gates) {
  for (const auto& g : gates) apply_gate(g);
}

void DensityMatrix::apply_clifford(const CliffordOp& c) {
  if (c.n_qubits() != n_) throw SizeMismatch("apply_clifford: size mismatch");
  apply_gates(c.gates());
}

void DensityMatrix::apply_pauli(const PauliString& p) {
  if (p.size() != n_) throw SizeMismatch("apply_pauli: size mismatch");
  const PauliAction a(p);
  rho_ = pauli_right(a, pauli_left(a, rho_)).eval();
  // P rho P, and P^dagger = conj(phase)^2 P for a non-Hermitian phase.
  if (!p.is_hermitian()) rho_ = -rho_;
}

void DensityMatrix::apply_unitary(const Matrix& u) {
  if (u.rows() != rho_.rows() || u.cols() != rho_.cols()) throw SizeMismatch("apply_unitary: size mismatch");
  rho_ = (u * rho_ * u.adjoint()).eval();
}

double DensityMatrix::expectation(const PauliString& p) const {
  if (p.size() != n_) throw SizeMismatch("expectation: size mismatch");
  if (!p.is_hermitian()) throw std::invalid_argument("expectation of a non-Hermitian Pauli");
  const PauliAction a(p);
  // tr(P rho) = sum_b coeff(b ^ x) rho(b ^ x, b)
  double sum = 0.0;
  for (std::size_t b = 0; b < dim(); ++b) {
    sum += times_i_pow(a.power(b ^ a.xmask), rho_(static_cast<Eigen::Index>(b ^ a.xmask), static_cast<Eigen::Index>(b))).real();
  }
  return sum;
}

double DensityMatrix::project_pauli(const PauliString& p, int outcome) {
  if (p.size() != n_) throw SizeMismatch("project_pauli: size mismatch");
  if (!p.is_hermitian()) throw std::invalid_argument("measured Pauli must be Hermitian");
  const double s = outcome ? -1.0 : 1.0;
  const PauliAction a(p);
  // (rho + s P rho + s rho P + P rho P) / 4, entry by entry.
  const auto d = static_cast<std::size_t>(rho_.rows());
  Matrix out(rho_.rows(), rho_.cols());
  for (std::size_t c = 0; c < d; ++c) {
    const auto ci = static_cast<Eigen::Index>(c), cx = static_cast<Eigen::Index>(c ^ a.xmask);
    const unsigned kc = a.power(c);
    for (std::size_t r = 0; r < d; ++r) {
      const auto ri = static_cast<Eigen::Index>(r), rx = static_cast<Eigen::Index>(r ^ a.xmask);
      const unsigned kr = a.power(r ^ a.xmask);
      out(ri, ci) = 0.25 * (rho_(ri, ci) + s * times_i_pow(kr, rho_(rx, ci)) + s * times_i_pow(kc, rho_(ri, cx)) +
                            times_i_pow(kr + kc, rho_(rx, cx)));
    }
  }
  const double prob = out.trace().real();
  if (prob < 1e-12) throw ZeroProbabilityOutcome("projection onto a zero-probability outcome");
  rho_ = out / prob;
  return prob;
}

MeasurementRecord DensityMatrix::measure_pauli(const PauliString& p, std::mt19937_64& rng, std::string label) {
  const double p0 = std::clamp((1.0 + expectation(p)) / 2.0, 0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int outcome = u(rng) < p0 ? 0 : 1;
  if (outcome == 0 && p0 < 1e-12) outcome = 1;
  if (outcome == 1 && p0 > 1.0 - 1e-12) outcome = 0;
  const double prob = project_pauli(p, outcome);
  return {std::move(label), outcome, prob};
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  check_cap(n_ + other.n_);
  Matrix out(rho_.rows() * other.rho_.rows(), rho_.cols() * other.rho_.cols());
  for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho_.cols(); ++j) {
      out.block(i * other.rho_.rows(), j * other.rho_.cols(), other.rho_.rows(), other.rho_.cols()) =
          rho_(i, j) * other.rho_;
    }
  }
  return DensityMatrix(n_ + other.n_, std::move(out));
}

DensityMatrix DensityMatrix::reduced(const std::vector<std::size_t>& keep) const {
  std::vector<bool> kept(n_, false);
  for (std::size_t q : keep) {
    if (q >= n_ || kept[q]) throw std::invalid_argument("reduced: bad qubit list");
    kept[q] = true;
  }
  std::size_t traced_mask = 0;
  for (std::size_t q = 0; q < n_; ++q) {
    if (!kept[q]) traced_mask |= mask_of(n_, q);
  }
  const std::size_t k = keep.size();
  const std::size_t dim = std::size_t{1} << n_;
  std::vector<std::size_t> small(dim, 0);
  for (std::size_t b = 0; b < dim; ++b) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (b & mask_of(n_, keep[i])) s |= mask_of(k, i);
    }
    small[b] = s;
  }
  const auto kd = static_cast<Eigen::Index>(std::size_t{1} << k);
  Matrix out = Matrix::Zero(kd, kd);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & traced_mask) != (c & traced_mask)) continue;
      out(static_cast<Eigen::Index>(small[r]), static_cast<Eigen::Index>(small[c])) +=
          rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return DensityMatrix(k, std::move(out));
}

DensityMatrix DensityMatrix::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != n_) throw SizeMismatch("permuted: order length mismatch");
  return reduced(order);
}

bool DensityMatrix::valid(double trace_tol, double herm_tol, double psd_tol) const {
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > trace_tol) return false;
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -psd_tol;
}

std::string DensityMatrix::to_json() const {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < rho_.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho_.cols(); ++c) {
      data.push_back({rho_(r, c).real(), rho_(r, c).imag()});
    }
  }
  return nlohmann::json{{"n", n_}, {"data", data}}.dump();
}

Matrix pauli_matrix(const PauliString& p) {
  check_cap(p.size());
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << p.size());
  return pauli_left(PauliAction(p), Matrix::Identity(d, d));
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw SizeMismatch("trace_distance: size mismatch");
  Matrix diff = a - b;
  diff = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

double unitary_channel_distance(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows()) throw SizeMismatch("unitary_channel_distance: size mismatch");
  const double d = static_cast<double>(u.rows());
  const double overlap = std::norm((u.adjoint() * v).trace()) / (d * d);
  return std::sqrt(std::max(0.0, 1.0 - overlap));
}

Matrix gates_unitary(std::size_t n, const std::vector<Gate>& gates) {
  check_cap(n);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix u = Matrix::Identity(d, d);
  for (const auto& g : gates) left_gate(u, n, g);
  return u;
}

}  // namespace qhe
