// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qhelab/pauli.hpp"

// Displacement-key encryption in phase space. Quadratures are ordered
// (x_1..x_n, p_1..p_n) with [x, p] = i, a = (x + i p)/sqrt(2), and
// D(x, p) = exp(i p x^ - i x p^) = D(alpha) for alpha = (x + i p)/sqrt(2).
namespace qhe::cv {

using Complex = std::complex<double>;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using ComplexMat = Eigen::MatrixXcd;

class NotSymplectic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Per-mode phase-space shift.
class DisplacementVec {
 public:
  DisplacementVec() = default;
  explicit DisplacementVec(std::size_t n_modes) : d_(RealVec::Zero(2 * static_cast<Eigen::Index>(n_modes))) {}
  /// Real form (x_1..x_n, p_1..p_n); entries must be finite.
  static DisplacementVec from_real(const RealVec& d);
  static DisplacementVec from_complex(const std::vector<Complex>& alpha);

  std::size_t n_modes() const { return static_cast<std::size_t>(d_.size() / 2); }
  double x(std::size_t mode) const { return d_(static_cast<Eigen::Index>(mode)); }
  double p(std::size_t mode) const { return d_(static_cast<Eigen::Index>(n_modes() + mode)); }
  void set(std::size_t mode, double x, double p);
  Complex alpha(std::size_t mode) const;
  std::vector<Complex> to_complex() const;
  const RealVec& real() const { return d_; }

  DisplacementVec operator+(const DisplacementVec& o) const;
  std::string to_json() const;

 private:
  RealVec d_;
};

/// Standard form Omega = [[0, I], [-I, 0]].
RealMat symplectic_form(std::size_t n_modes);

/// Phase phi in D(a) D(b) = e^{i phi} D(b) D(a).
double commutation_phase(const DisplacementVec& a, const DisplacementVec& b);

/// Affine Heisenberg action r -> S r + c of a Gaussian unitary.
class SymplecticOp {
 public:
  /// Throws NotSymplectic when S^T Omega S != Omega within 1e-10.
  static SymplecticOp from_matrix(const RealMat& s, RealVec c = {});
  static SymplecticOp identity(std::size_t n_modes);
  /// Bogoliubov form U^dagger a U = A a + B a^dagger.
  static SymplecticOp from_bogoliubov(const ComplexMat& a, const ComplexMat& b);
  /// Passive network with forward amplitude map beta = u alpha; u unitary.
  static SymplecticOp passive(const ComplexMat& u);
  static SymplecticOp squeezer(std::size_t n_modes, std::size_t mode, double r, double theta);
  static SymplecticOp displacement(const DisplacementVec& d);

  std::size_t n_modes() const { return static_cast<std::size_t>(s_.rows() / 2); }
  const RealMat& matrix() const { return s_; }
  const RealVec& shift() const { return c_; }
  bool passive_network() const;

  /// Action of "this after first": Heisenberg maps compose in reverse.
  SymplecticOp after(const SymplecticOp& first) const;
  bool approx_equal(const SymplecticOp& o, double tol) const;

 private:
  RealMat s_;
  RealVec c_;
};

enum class GaussKind { BS, PS, SMS, DISP };

struct GaussOp {
  GaussKind kind;
  std::size_t mode0 = 0;
  std::size_t mode1 = 0;  // BS only
  double a = 0;           // theta (BS, PS), r (SMS), x (DISP)
  double b = 0;           // theta (SMS), p (DISP)
};

/// Gaussian circuit; text lines "MODES n", "BS i j theta", "PS i theta",
/// "SMS i r theta", "DISP i x p", '#' comments. BS i j theta maps
/// (alpha_i, alpha_j) -> (c alpha_i - s alpha_j, s alpha_i + c alpha_j).
class GaussianCircuit {
 public:
  explicit GaussianCircuit(std::size_t n_modes = 0) : n_(n_modes) {}
  /// Without a MODES line the mode count is the largest index + 1.
  static GaussianCircuit parse(std::string_view text);
  std::string serialize() const;

  std::size_t n_modes() const { return n_; }
  const std::vector<GaussOp>& ops() const { return ops_; }
  void add(const GaussOp& op);

  /// Affine action of the whole circuit (first op applied first).
  SymplecticOp symplectic() const;

 private:
  std::size_t n_;
  std::vector<GaussOp> ops_;
};

SymplecticOp op_symplectic(std::size_t n_modes, const GaussOp& op);

GaussianCircuit random_gaussian_circuit(std::size_t n_modes, std::size_t depth, std::mt19937_64& rng);

/// Forward transport through a passive network: U D(alpha) = D(beta) U,
/// beta = u alpha. Throws NotSymplectic when u is not unitary.
DisplacementVec transport_key_linear(const ComplexMat& u, const DisplacementVec& key);

/// D(alpha) S(z) = S(z) D(gamma) with z = r e^{i theta}.
Complex transport_key_squeezer(double r, double theta, Complex alpha);

/// key' with D(key) G = G D(key') (up to a global phase when G contains
/// displacements), computed layer by layer from the amplitude formulas.
DisplacementVec transport_key_gaussian(const GaussianCircuit& g, const DisplacementVec& key);

/// Largest entry of |S key' - key|: zero iff D(key) G and G D(key') have
/// the same affine action.
double transport_residual(const GaussianCircuit& g, const DisplacementVec& key, const DisplacementVec& transported);

/// Nullifier n = c . r with integer coefficients in {-1, 0, 1}.
struct Nullifier {
  std::vector<int> x_coeffs;
  std::vector<int> p_coeffs;

  static Nullifier position(std::vector<int> coeffs);
  static Nullifier momentum(std::vector<int> coeffs);
  std::size_t n_modes() const { return x_coeffs.size(); }
  RealVec coefficients() const;
};

using NullifierSet = std::vector<Nullifier>;

/// Heisenberg image c -> S^T c of each nullifier's coefficient vector.
std::vector<RealVec> nullifier_transport(const NullifierSet& nulls, const SymplecticOp& u);

/// D(key)^dagger n D(key) = n + offset.
double nullifier_offset(const RealVec& coeffs, const DisplacementVec& key);

/// GKP logical shifts for qudit dimension n and lattice spacing alpha:
/// X -> position shift alpha, Z -> momentum shift 2 pi / (n alpha).
DisplacementVec gkp_logical_to_displacement(char pauli, unsigned n, double alpha);

/// Mode-wise image of a Pauli string (Y as X then Z).
DisplacementVec gkp_pauli_displacement(const PauliString& p, unsigned n, double alpha);

/// Reduces a displacement modulo the GKP stabilizer lattice
/// (n alpha, 2 pi / alpha) per mode, into [0, period).
DisplacementVec gkp_reduce(const DisplacementVec& d, unsigned n, double alpha);

struct CvCheckReport {
  std::size_t trials = 0;
  double max_identity_residual = 0;
  double max_group_residual = 0;
  double max_linearity_residual = 0;
  Complex squeezer_gamma;  // alpha = 1, r = ln 2, theta = 0
  Complex gkp_scalar;      // n = 2, alpha = sqrt(pi)
  bool pass = false;
  std::string to_json() const;
};

/// Random 3-mode identity suite.
CvCheckReport cv_identity_suite(std::size_t trials, std::uint64_t seed, double tol = 1e-10);

}  // namespace qhe::cv
