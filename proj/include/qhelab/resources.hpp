// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qhe {

using BigInt = boost::multiprecision::cpp_int;

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fault-tolerant permutation-key budget. With k set, m follows the optimal
/// rule m = floor((sqrt(k^2 + N) + k) / 2); without k, m is the largest
/// that fits N for r = s rows.
struct ResourceParams {
  double p0 = 1e-6;           // physical error probability
  double p_threshold = 1e-3;  // threshold
  double a_coeff = 10;        // prefactor in the logical failure bound
  double p_target = 1e-30;    // target logical failure per gadget
  unsigned depth = 1;
  BigInt n_total = 0;
  std::optional<unsigned> k;  // security exponent, Delta_bar <= 2^-k
  std::size_t s = 1;          // input rows, used without k

  void validate() const;
};

struct ResourcePlan {
  BigInt n_total;
  std::optional<unsigned> k;
  unsigned depth = 0;
  unsigned t = 0;
  BigInt n;  // (2t + 1)^2
  BigInt a_nt;
  BigInt m;
  BigInt r_bound;  // authoritative
  std::optional<double> r_approx;
  double delta_bar_log2 = 0;
  BigInt n_tot_used;
  std::string m_rule;  // "optimal-m" or "m-constraint"
  bool feasible = true;
  std::string note;  // reason when infeasible

  std::string to_json() const;
};

/// Smallest t >= 1 with a (p0/p_th)^t <= p_target.
unsigned min_t(const ResourceParams& p);

/// 2tn[t(t+2)+n] C(t,2); checked against t^3 n (t^2 + 2t + n).
BigInt ancilla_count(const BigInt& n, unsigned t);

/// 2mr(1 + 3(depth+1)A).
BigInt total_qubits(const BigInt& m, const BigInt& r, unsigned depth, const BigInt& a_nt);

/// log2 of Delta(r + 3r(depth+1)A, m).
double security_after_qec_log2(const BigInt& r, unsigned depth, const BigInt& a_nt, const BigInt& m);
double security_after_qec(const BigInt& r, unsigned depth, const BigInt& a_nt, const BigInt& m);

/// Plan for a given t (min_t(p) in max_power). Throws Infeasible when r < 1.
ResourcePlan plan_with_t(const ResourceParams& p, unsigned t);
ResourcePlan max_power(const ResourceParams& p);

/// One row per grid point; infeasible points are kept with feasible = false.
std::vector<ResourcePlan> tradeoff_sweep(const ResourceParams& p, const std::vector<BigInt>& grid);

/// Columns N_tot,k,t,n,A_nt,m,r_bound,r_approx,delta_bar_log2,m_rule,feasible.
std::string sweep_csv(const std::vector<ResourcePlan>& rows);
std::string sweep_json(const std::vector<ResourcePlan>& rows);

/// Exact count from "5000", "1e22" or "3.5e6"; throws invalid_argument when
/// the value is negative or not an integer.
BigInt parse_count(const std::string& text);

/// p0 = 1e-6, p_target = 1e-30, threshold 1e-3, a = 10, depth 1, k = 10.
ResourceParams fig5_params();
/// N_tot = 10^19 .. 10^24 in half-decade steps.
std::vector<BigInt> fig5_grid();

}  // namespace qhe
