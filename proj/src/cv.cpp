// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/cv.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qhelab/circuit.hpp"

namespace qhe::cv {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_mode(std::size_t mode, std::size_t n) {
  if (mode >= n) throw std::out_of_range("mode " + std::to_string(mode) + " outside " + std::to_string(n) + " modes");
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

// Backward amplitude map of one element: D(alpha) G = G D(result).
void backward_in_place(const GaussOp& op, std::vector<Complex>& a) {
  switch (op.kind) {
    case GaussKind::BS: {
      // u = [[c, -s], [s, c]]; u^dagger = u^T.
      const double c = std::cos(op.a), s = std::sin(op.a);
      const Complex ai = a[op.mode0], aj = a[op.mode1];
      a[op.mode0] = c * ai + s * aj;
      a[op.mode1] = -s * ai + c * aj;
      break;
    }
    case GaussKind::PS:
      a[op.mode0] *= std::polar(1.0, -op.a);
      break;
    case GaussKind::SMS:
      a[op.mode0] = transport_key_squeezer(op.a, op.b, a[op.mode0]);
      break;
    case GaussKind::DISP:
      break;
  }
}

}  // namespace

// ---------------------------------------------------------------- keys

DisplacementVec DisplacementVec::from_real(const RealVec& d) {
  if (d.size() % 2 != 0) throw std::invalid_argument("displacement needs an even number of entries");
  for (Index i = 0; i < d.size(); ++i) check_finite(d(i), "displacement");
  DisplacementVec v;
  v.d_ = d;
  return v;
}

DisplacementVec DisplacementVec::from_complex(const std::vector<Complex>& alpha) {
  DisplacementVec v(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    v.set(i, std::sqrt(2.0) * alpha[i].real(), std::sqrt(2.0) * alpha[i].imag());
  }
  return v;
}

void DisplacementVec::set(std::size_t mode, double x, double p) {
  check_mode(mode, n_modes());
  check_finite(x, "x");
  check_finite(p, "p");
  d_(idx(mode)) = x;
  d_(idx(n_modes() + mode)) = p;
}

Complex DisplacementVec::alpha(std::size_t mode) const {
  check_mode(mode, n_modes());
  return Complex(x(mode), p(mode)) / std::sqrt(2.0);
}

std::vector<Complex> DisplacementVec::to_complex() const {
  std::vector<Complex> out(n_modes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha(i);
  return out;
}

DisplacementVec DisplacementVec::operator+(const DisplacementVec& o) const {
  if (o.n_modes() != n_modes()) throw std::invalid_argument("mode count mismatch");
  return from_real(d_ + o.d_);
}

std::string DisplacementVec::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < n_modes(); ++i) j.push_back({{"x", x(i)}, {"p", p(i)}});
  return j.dump();
}

RealMat symplectic_form(std::size_t n_modes) {
  const Index n = idx(n_modes);
  RealMat o = RealMat::Zero(2 * n, 2 * n);
  o.topRightCorner(n, n) = RealMat::Identity(n, n);
  o.bottomLeftCorner(n, n) = -RealMat::Identity(n, n);
  return o;
}

double commutation_phase(const DisplacementVec& a, const DisplacementVec& b) {
  if (a.n_modes() != b.n_modes()) throw std::invalid_argument("mode count mismatch");
  // [i(p1 x^ - x1 p^), i(p2 x^ - x2 p^)] = i (p1 x2 - x1 p2).
  return -a.real().dot(symplectic_form(a.n_modes()) * b.real());
}

// ---------------------------------------------------------------- symplectic ops

SymplecticOp SymplecticOp::from_matrix(const RealMat& s, RealVec c) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    throw NotSymplectic("symplectic matrix must be 2n x 2n");
  }
  const auto n = static_cast<std::size_t>(s.rows() / 2);
  const RealMat o = symplectic_form(n);
  if ((s.transpose() * o * s - o).cwiseAbs().maxCoeff() > 1e-10) throw NotSymplectic("S^T Omega S != Omega");
  if (c.size() == 0) c = RealVec::Zero(s.rows());
  if (c.size() != s.rows()) throw std::invalid_argument("displacement part has the wrong length");
  SymplecticOp op;
  op.s_ = s;
  op.c_ = std::move(c);
  return op;
}

SymplecticOp SymplecticOp::identity(std::size_t n_modes) {
  return from_matrix(RealMat::Identity(2 * idx(n_modes), 2 * idx(n_modes)));
}

SymplecticOp SymplecticOp::from_bogoliubov(const ComplexMat& a, const ComplexMat& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw std::invalid_argument("Bogoliubov blocks must be square and equal size");
  }
  const Index n = a.rows();
  const ComplexMat plus = a + b, minus = a - b;
  RealMat s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = plus.real();
  s.topRightCorner(n, n) = -minus.imag();
  s.bottomLeftCorner(n, n) = plus.imag();
  s.bottomRightCorner(n, n) = minus.real();
  return from_matrix(s);
}

SymplecticOp SymplecticOp::passive(const ComplexMat& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw NotSymplectic("passive network matrix must be square");
  if ((u.adjoint() * u - ComplexMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw NotSymplectic("passive network matrix is not unitary");
  }
  return from_bogoliubov(u, ComplexMat::Zero(u.rows(), u.cols()));
}

SymplecticOp SymplecticOp::squeezer(std::size_t n_modes, std::size_t mode, double r, double theta) {
  check_mode(mode, n_modes);
  check_finite(r, "squeezing");
  check_finite(theta, "squeezing angle");
  ComplexMat a = ComplexMat::Identity(idx(n_modes), idx(n_modes));
  ComplexMat b = ComplexMat::Zero(idx(n_modes), idx(n_modes));
  a(idx(mode), idx(mode)) = std::cosh(r);
  b(idx(mode), idx(mode)) = -std::polar(1.0, theta) * std::sinh(r);
  return from_bogoliubov(a, b);
}

SymplecticOp SymplecticOp::displacement(const DisplacementVec& d) {
  SymplecticOp op = identity(d.n_modes());
  op.c_ = d.real();
  return op;
}

bool SymplecticOp::passive_network() const {
  // Orthogonal and symplectic.
  return (s_.transpose() * s_ - RealMat::Identity(s_.rows(), s_.cols())).cwiseAbs().maxCoeff() < 1e-10;
}

SymplecticOp SymplecticOp::after(const SymplecticOp& first) const {
  if (first.n_modes() != n_modes()) throw std::invalid_argument("mode count mismatch");
  SymplecticOp op;
  op.s_ = s_ * first.s_;
  op.c_ = s_ * first.c_ + c_;
  return op;
}

bool SymplecticOp::approx_equal(const SymplecticOp& o, double tol) const {
  return o.n_modes() == n_modes() && (s_ - o.s_).cwiseAbs().maxCoeff() <= tol &&
         (c_ - o.c_).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------- circuits

SymplecticOp op_symplectic(std::size_t n_modes, const GaussOp& op) {
  check_mode(op.mode0, n_modes);
  switch (op.kind) {
    case GaussKind::BS: {
      check_mode(op.mode1, n_modes);
      if (op.mode0 == op.mode1) throw std::invalid_argument("beamsplitter needs two distinct modes");
      ComplexMat u = ComplexMat::Identity(idx(n_modes), idx(n_modes));
      const double c = std::cos(op.a), s = std::sin(op.a);
      u(idx(op.mode0), idx(op.mode0)) = c;
      u(idx(op.mode0), idx(op.mode1)) = -s;
      u(idx(op.mode1), idx(op.mode0)) = s;
      u(idx(op.mode1), idx(op.mode1)) = c;
      return SymplecticOp::passive(u);
    }
    case GaussKind::PS: {
      ComplexMat u = ComplexMat::Identity(idx(n_modes), idx(n_modes));
      u(idx(op.mode0), idx(op.mode0)) = std::polar(1.0, op.a);
      return SymplecticOp::passive(u);
    }
    case GaussKind::SMS:
      return SymplecticOp::squeezer(n_modes, op.mode0, op.a, op.b);
    case GaussKind::DISP: {
      DisplacementVec d(n_modes);
      d.set(op.mode0, op.a, op.b);
      return SymplecticOp::displacement(d);
    }
  }
  throw std::logic_error("unknown Gaussian element");
}

void GaussianCircuit::add(const GaussOp& op) {
  check_finite(op.a, "parameter");
  check_finite(op.b, "parameter");
  op_symplectic(n_, op);  // validates modes
  ops_.push_back(op);
}

SymplecticOp GaussianCircuit::symplectic() const {
  SymplecticOp acc = SymplecticOp::identity(n_);
  for (const auto& op : ops_) acc = op_symplectic(n_, op).after(acc);
  return acc;
}

GaussianCircuit GaussianCircuit::parse(std::string_view text) {
  std::vector<std::pair<std::size_t, GaussOp>> parsed;
  std::size_t declared = 0, max_mode = 0;
  bool have_modes = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto read_mode = [&]() {
      long long v = -1;
      if (!(ls >> v) || v < 0) throw ParseError(line_no, "expected a mode index");
      max_mode = std::max(max_mode, static_cast<std::size_t>(v));
      return static_cast<std::size_t>(v);
    };
    auto read_real = [&]() {
      double v = 0;
      if (!(ls >> v) || !std::isfinite(v)) throw ParseError(line_no, "expected a finite real parameter");
      return v;
    };
    GaussOp op{GaussKind::PS};
    if (word == "MODES") {
      long long v = 0;
      if (have_modes || !parsed.empty() || !(ls >> v) || v <= 0) {
        throw ParseError(line_no, "MODES must come first and take a positive count");
      }
      declared = static_cast<std::size_t>(v);
      have_modes = true;
    } else if (word == "BS") {
      op.kind = GaussKind::BS;
      op.mode0 = read_mode();
      op.mode1 = read_mode();
      op.a = read_real();
      if (op.mode0 == op.mode1) throw ParseError(line_no, "BS needs two distinct modes");
    } else if (word == "PS") {
      op.kind = GaussKind::PS;
      op.mode0 = read_mode();
      op.a = read_real();
    } else if (word == "SMS") {
      op.kind = GaussKind::SMS;
      op.mode0 = read_mode();
      op.a = read_real();
      op.b = read_real();
    } else if (word == "DISP") {
      op.kind = GaussKind::DISP;
      op.mode0 = read_mode();
      op.a = read_real();
      op.b = read_real();
    } else {
      throw ParseError(line_no, "unknown element '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(line_no, "trailing token '" + extra + "'");
    if (word != "MODES") parsed.emplace_back(line_no, op);
  }
  const std::size_t n = have_modes ? declared : (parsed.empty() ? 0 : max_mode + 1);
  if (n == 0) throw ParseError(line_no, "empty Gaussian circuit needs a MODES line");
  GaussianCircuit g(n);
  for (const auto& [ln, op] : parsed) {
    if (op.mode0 >= n || (op.kind == GaussKind::BS && op.mode1 >= n)) throw ParseError(ln, "mode out of range");
    g.add(op);
  }
  return g;
}

std::string GaussianCircuit::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "MODES " << n_ << "\n";
  for (const auto& op : ops_) {
    switch (op.kind) {
      case GaussKind::BS:
        out << "BS " << op.mode0 << " " << op.mode1 << " " << op.a << "\n";
        break;
      case GaussKind::PS:
        out << "PS " << op.mode0 << " " << op.a << "\n";
        break;
      case GaussKind::SMS:
        out << "SMS " << op.mode0 << " " << op.a << " " << op.b << "\n";
        break;
      case GaussKind::DISP:
        out << "DISP " << op.mode0 << " " << op.a << " " << op.b << "\n";
        break;
    }
  }
  return out.str();
}

GaussianCircuit random_gaussian_circuit(std::size_t n_modes, std::size_t depth, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> squeeze(-0.5, 0.5);
  std::normal_distribution<double> shift;
  GaussianCircuit g(n_modes);
  for (std::size_t layer = 0; layer < depth; ++layer) {
    for (std::size_t i = 0; i + 1 < n_modes; ++i) {
      const std::size_t j = i + 1 + rng() % (n_modes - i - 1);
      g.add({GaussKind::BS, i, j, angle(rng), 0});
    }
    for (std::size_t i = 0; i < n_modes; ++i) {
      g.add({GaussKind::PS, i, 0, angle(rng), 0});
      g.add({GaussKind::SMS, i, 0, squeeze(rng), angle(rng)});
    }
    if (rng() % 2) g.add({GaussKind::DISP, rng() % n_modes, 0, shift(rng), shift(rng)});
  }
  return g;
}

// ---------------------------------------------------------------- transport

DisplacementVec transport_key_linear(const ComplexMat& u, const DisplacementVec& key) {
  const SymplecticOp op = SymplecticOp::passive(u);  // validates
  if (op.n_modes() != key.n_modes()) throw std::invalid_argument("mode count mismatch");
  const auto alpha = key.to_complex();
  Eigen::VectorXcd a(idx(alpha.size()));
  for (std::size_t i = 0; i < alpha.size(); ++i) a(idx(i)) = alpha[i];
  const Eigen::VectorXcd beta = u * a;
  return DisplacementVec::from_complex(std::vector<Complex>(beta.data(), beta.data() + beta.size()));
}

Complex transport_key_squeezer(double r, double theta, Complex alpha) {
  return alpha * std::cosh(r) + std::conj(alpha) * std::polar(1.0, theta) * std::sinh(r);
}

DisplacementVec transport_key_gaussian(const GaussianCircuit& g, const DisplacementVec& key) {
  if (key.n_modes() != g.n_modes()) throw std::invalid_argument("key and circuit mode counts differ");
  auto a = key.to_complex();
  for (auto it = g.ops().rbegin(); it != g.ops().rend(); ++it) backward_in_place(*it, a);
  return DisplacementVec::from_complex(a);
}

double transport_residual(const GaussianCircuit& g, const DisplacementVec& key, const DisplacementVec& transported) {
  if (key.n_modes() != g.n_modes() || transported.n_modes() != g.n_modes()) {
    throw std::invalid_argument("mode count mismatch");
  }
  // D(d) G has action S r + c + d; G D(d') has S r + S d' + c.
  return (g.symplectic().matrix() * transported.real() - key.real()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- nullifiers

namespace {

void check_coeffs(const std::vector<int>& c) {
  for (int v : c) {
    if (v < -1 || v > 1) throw std::invalid_argument("nullifier coefficients must be -1, 0 or 1");
  }
}

}  // namespace

Nullifier Nullifier::position(std::vector<int> coeffs) {
  check_coeffs(coeffs);
  Nullifier n;
  n.p_coeffs.assign(coeffs.size(), 0);
  n.x_coeffs = std::move(coeffs);
  return n;
}

Nullifier Nullifier::momentum(std::vector<int> coeffs) {
  check_coeffs(coeffs);
  Nullifier n;
  n.x_coeffs.assign(coeffs.size(), 0);
  n.p_coeffs = std::move(coeffs);
  return n;
}

RealVec Nullifier::coefficients() const {
  const std::size_t n = n_modes();
  RealVec c(2 * idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    c(idx(i)) = x_coeffs[i];
    c(idx(n + i)) = p_coeffs[i];
  }
  return c;
}

std::vector<RealVec> nullifier_transport(const NullifierSet& nulls, const SymplecticOp& u) {
  std::vector<RealVec> out;
  for (const auto& nl : nulls) {
    if (nl.n_modes() != u.n_modes()) throw std::invalid_argument("nullifier and operation mode counts differ");
    out.push_back(u.matrix().transpose() * nl.coefficients());
  }
  return out;
}

double nullifier_offset(const RealVec& coeffs, const DisplacementVec& key) {
  if (coeffs.size() != key.real().size()) throw std::invalid_argument("mode count mismatch");
  return coeffs.dot(key.real());
}

// ---------------------------------------------------------------- GKP

DisplacementVec gkp_logical_to_displacement(char pauli, unsigned n, double alpha) {
  if (n < 2) throw std::invalid_argument("GKP dimension must be at least 2");
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("lattice spacing must be positive");
  DisplacementVec d(1);
  switch (pauli) {
    case 'I':
      break;
    case 'X':
      d.set(0, alpha, 0);  // e^{-i p^ alpha}
      break;
    case 'Z':
      d.set(0, 0, 2 * std::numbers::pi / (n * alpha));  // e^{2 pi i x^ / (n alpha)}
      break;
    case 'Y':
      d.set(0, alpha, 2 * std::numbers::pi / (n * alpha));
      break;
    default:
      throw std::invalid_argument(std::string("not a Pauli letter: ") + pauli);
  }
  return d;
}

DisplacementVec gkp_pauli_displacement(const PauliString& p, unsigned n, double alpha) {
  DisplacementVec d(p.size());
  for (std::size_t q = 0; q < p.size(); ++q) {
    const auto m = gkp_logical_to_displacement("IXYZ"[p.letter(q)], n, alpha);
    d.set(q, m.x(0), m.p(0));
  }
  return d;
}

DisplacementVec gkp_reduce(const DisplacementVec& d, unsigned n, double alpha) {
  gkp_logical_to_displacement('I', n, alpha);  // validates
  const double px = n * alpha, pp = 2 * std::numbers::pi / alpha;
  auto wrap = [](double v, double period) {
    double r = std::fmod(v, period);
    if (r < 0) r += period;
    // Snap values a rounding error below the period back to zero.
    if (period - r < 1e-12 * period) r = 0;
    return r;
  };
  DisplacementVec out(d.n_modes());
  for (std::size_t i = 0; i < d.n_modes(); ++i) out.set(i, wrap(d.x(i), px), wrap(d.p(i), pp));
  return out;
}

// ---------------------------------------------------------------- suite

std::string CvCheckReport::to_json() const {
  return nlohmann::json{{"trials", trials},
                        {"max_identity_residual", max_identity_residual},
                        {"max_group_residual", max_group_residual},
                        {"max_linearity_residual", max_linearity_residual},
                        {"squeezer_gamma", {squeezer_gamma.real(), squeezer_gamma.imag()}},
                        {"gkp_scalar", {gkp_scalar.real(), gkp_scalar.imag()}},
                        {"pass", pass}}
      .dump();
}

CvCheckReport cv_identity_suite(std::size_t trials, std::uint64_t seed, double tol) {
  constexpr std::size_t kModes = 3;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto random_key = [&]() {
    RealVec d(2 * idx(kModes));
    for (Index i = 0; i < d.size(); ++i) d(i) = g(rng);
    return DisplacementVec::from_real(d);
  };
  CvCheckReport rep;
  rep.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const GaussianCircuit first = random_gaussian_circuit(kModes, 2, rng);
    const GaussianCircuit second = random_gaussian_circuit(kModes, 2, rng);
    GaussianCircuit whole(kModes);
    for (const auto& op : first.ops()) whole.add(op);
    for (const auto& op : second.ops()) whole.add(op);

    const DisplacementVec a = random_key(), b = random_key();
    const DisplacementVec ta = transport_key_gaussian(whole, a);
    rep.max_identity_residual = std::max(rep.max_identity_residual, transport_residual(whole, a, ta));

    // D(a) G2 G1 = G2 D(a') G1 = G2 G1 D(a'').
    const DisplacementVec seq = transport_key_gaussian(first, transport_key_gaussian(second, a));
    double group = (seq.real() - ta.real()).cwiseAbs().maxCoeff();
    const SymplecticOp composed = second.symplectic().after(first.symplectic());
    if (!composed.approx_equal(whole.symplectic(), tol)) group = std::max(group, 1.0);
    rep.max_group_residual = std::max(rep.max_group_residual, group);

    const DisplacementVec sum = transport_key_gaussian(whole, a + b);
    const DisplacementVec parts = ta + transport_key_gaussian(whole, b);
    rep.max_linearity_residual =
        std::max(rep.max_linearity_residual, (sum.real() - parts.real()).cwiseAbs().maxCoeff());
  }
  rep.squeezer_gamma = transport_key_squeezer(std::log(2.0), 0, 1.0);
  const double spacing = std::sqrt(std::numbers::pi);
  rep.gkp_scalar = std::polar(1.0, commutation_phase(gkp_logical_to_displacement('Z', 2, spacing),
                                                      gkp_logical_to_displacement('X', 2, spacing)));
  rep.pass = rep.max_identity_residual <= tol && rep.max_group_residual <= tol && rep.max_linearity_residual <= tol &&
             std::abs(rep.squeezer_gamma - Complex(2, 0)) < 1e-12 &&
             std::abs(rep.gkp_scalar - std::polar(1.0, 2 * std::numbers::pi / 2)) < 1e-12;
  return rep;
}

}  // namespace qhe::cv
