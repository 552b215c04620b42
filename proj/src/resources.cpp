// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/resources.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qhelab/perm_key.hpp"

namespace qhe {

namespace {

BigInt denominator(unsigned depth, const BigInt& a_nt) { return 1 + 3 * (BigInt(depth) + 1) * a_nt; }

double to_double(const BigInt& v) { return v.convert_to<double>(); }

// Integer when it fits in 64 bits, decimal string otherwise.
nlohmann::json big_json(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

bool in_open_unit(double v) { return v > 0 && v < 1; }

}  // namespace

void ResourceParams::validate() const {
  if (!in_open_unit(p0) || !in_open_unit(p_threshold) || !in_open_unit(p_target)) {
    throw std::invalid_argument("probabilities must lie in (0, 1)");
  }
  if (!(a_coeff > 0)) throw std::invalid_argument("a_coeff must be positive");
  if (p0 >= p_threshold) throw std::invalid_argument("p0 must be below the threshold for convergence");
  if (n_total <= 0) throw std::invalid_argument("n_total must be positive");
  if (s == 0) throw std::invalid_argument("s must be positive");
}

unsigned min_t(const ResourceParams& p) {
  p.validate();
  if (p.p_target >= p.a_coeff) throw std::invalid_argument("p_target must be below a_coeff");
  const double ratio = p.p0 / p.p_threshold;
  const double x = std::log(p.p_target / p.a_coeff) / std::log(ratio);
  auto t = static_cast<unsigned>(std::max(1.0, std::ceil(x)));
  // Exact boundary values can land one above after rounding.
  auto holds = [&](unsigned tt) { return p.a_coeff * std::pow(ratio, tt) <= p.p_target * (1 + 1e-12); };
  while (t > 1 && holds(t - 1)) --t;
  while (!holds(t)) ++t;
  return t;
}

BigInt ancilla_count(const BigInt& n, unsigned t) {
  if (t < 1 || n < 1) throw std::invalid_argument("ancilla_count needs n, t >= 1");
  const BigInt bt = t;
  const BigInt binom = bt * (bt - 1) / 2;
  const BigInt a = 2 * bt * n * (bt * (bt + 2) + n) * binom;
  if (a > bt * bt * bt * n * (bt * bt + 2 * bt + n)) throw std::logic_error("ancilla count exceeds its bound");
  return a;
}

BigInt total_qubits(const BigInt& m, const BigInt& r, unsigned depth, const BigInt& a_nt) {
  if (m < 0 || r < 0 || a_nt < 0) throw std::invalid_argument("total_qubits needs nonnegative arguments");
  return 2 * m * r * denominator(depth, a_nt);
}

double security_after_qec_log2(const BigInt& r, unsigned depth, const BigInt& a_nt, const BigInt& m) {
  return security_bound_log2(to_double(r * denominator(depth, a_nt)), to_double(m));
}

double security_after_qec(const BigInt& r, unsigned depth, const BigInt& a_nt, const BigInt& m) {
  return std::exp2(security_after_qec_log2(r, depth, a_nt, m));
}

ResourcePlan plan_with_t(const ResourceParams& p, unsigned t) {
  p.validate();
  ResourcePlan plan;
  plan.n_total = p.n_total;
  plan.k = p.k;
  plan.depth = p.depth;
  plan.t = t;
  plan.n = BigInt(2 * t + 1) * (2 * t + 1);
  plan.a_nt = ancilla_count(plan.n, t);
  const BigInt d = denominator(p.depth, plan.a_nt);
  if (p.k) {
    plan.m_rule = "optimal-m";
    const BigInt k = *p.k;
    // floor((sqrt(k^2+N) + k)/2) == floor((isqrt(k^2+N) + k)/2).
    const BigInt radicand = k * k + p.n_total;
    plan.m = (boost::multiprecision::sqrt(radicand) + k) / 2;
    plan.r_approx = std::sqrt(to_double(radicand)) - to_double(k);
    if (plan.m <= k) throw Infeasible("m <= k leaves no room for data rows");
    const BigInt two_m = 2 * plan.m;
    const BigInt num = (2 * plan.m - 2 * k) * two_m < p.n_total ? (2 * plan.m - 2 * k) * two_m : p.n_total;
    plan.r_bound = num / (two_m * d);
  } else {
    plan.m_rule = "m-constraint";
    plan.r_bound = p.s;
    plan.m = p.n_total / (2 * BigInt(p.s) * d);
    if (plan.m < 1) throw Infeasible("qubit budget too small for m >= 1");
  }
  if (plan.r_bound < 1) throw Infeasible("qubit budget forces r < 1");
  plan.n_tot_used = total_qubits(plan.m, plan.r_bound, p.depth, plan.a_nt);
  if (plan.n_tot_used > p.n_total) throw std::logic_error("plan exceeds the qubit budget");
  plan.delta_bar_log2 = security_after_qec_log2(plan.r_bound, p.depth, plan.a_nt, plan.m);
  return plan;
}

ResourcePlan max_power(const ResourceParams& p) { return plan_with_t(p, min_t(p)); }

std::vector<ResourcePlan> tradeoff_sweep(const ResourceParams& p, const std::vector<BigInt>& grid) {
  if (grid.empty()) throw std::invalid_argument("grid must not be empty");
  const unsigned t = min_t(p);
  std::vector<ResourcePlan> rows;
  for (const auto& n_total : grid) {
    ResourceParams q = p;
    q.n_total = n_total;
    try {
      rows.push_back(plan_with_t(q, t));
    } catch (const Infeasible& e) {
      ResourcePlan row;
      row.n_total = n_total;
      row.k = p.k;
      row.depth = p.depth;
      row.t = t;
      row.n = BigInt(2 * t + 1) * (2 * t + 1);
      row.a_nt = ancilla_count(row.n, t);
      row.m_rule = p.k ? "optimal-m" : "m-constraint";
      row.feasible = false;
      row.note = e.what();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string ResourcePlan::to_json() const {
  nlohmann::json j{{"N_tot", big_json(n_total)},
                   {"depth", depth},
                   {"t", t},
                   {"n", big_json(n)},
                   {"A_nt", big_json(a_nt)},
                   {"m", big_json(m)},
                   {"r_bound", big_json(r_bound)},
                   {"delta_bar_log2", feasible ? nlohmann::json(delta_bar_log2) : nlohmann::json(nullptr)},
                   {"n_tot_used", big_json(n_tot_used)},
                   {"m_rule", m_rule},
                   {"feasible", feasible}};
  j["k"] = k ? nlohmann::json(*k) : nlohmann::json(nullptr);
  j["r_approx"] = r_approx ? nlohmann::json(*r_approx) : nlohmann::json(nullptr);
  if (!note.empty()) j["note"] = note;
  return j.dump();
}

std::string sweep_csv(const std::vector<ResourcePlan>& rows) {
  // Doubles use the JSON writer's shortest round-trip form, so both formats
  // carry identical numbers.
  const auto num = [](double v) { return nlohmann::json(v).dump(); };
  std::ostringstream out;
  out << "N_tot,k,t,n,A_nt,m,r_bound,r_approx,delta_bar_log2,m_rule,feasible\n";
  for (const auto& r : rows) {
    out << r.n_total << ',' << (r.k ? std::to_string(*r.k) : "") << ',' << r.t << ',' << r.n << ',' << r.a_nt << ','
        << r.m << ',' << r.r_bound << ',';
    if (r.r_approx) out << num(*r.r_approx);
    out << ',';
    if (r.feasible) out << num(r.delta_bar_log2);
    out << ',' << r.m_rule << ',' << (r.feasible ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string sweep_json(const std::vector<ResourcePlan>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) j.push_back(nlohmann::json::parse(r.to_json()));
  return j.dump();
}

BigInt parse_count(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("'" + text + "' is not a nonnegative integer count"); };
  std::size_t i = 0;
  std::string digits;
  long frac = 0;
  bool dot = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    const char c = text[i];
    if (c == '.' && !dot) {
      dot = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      if (dot) ++frac;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  long exp = 0;
  if (i < text.size()) {
    const std::string e = text.substr(i + 1);
    if (e.empty() || e.size() > 4 || e.find_first_not_of("+0123456789") != std::string::npos) throw bad();
    exp = std::stol(e);
  }
  exp -= frac;
  BigInt v(digits);
  if (exp >= 0) return v * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp));
  const BigInt div = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-exp));
  if (v % div != 0) throw bad();
  return v / div;
}

ResourceParams fig5_params() {
  ResourceParams p;
  p.p0 = 1e-6;
  p.p_target = 1e-30;
  p.p_threshold = 1e-3;
  p.a_coeff = 10;
  p.depth = 1;
  p.k = 10;
  p.n_total = BigInt(1) << 70;
  return p;
}

std::vector<BigInt> fig5_grid() {
  std::vector<BigInt> grid;
  for (int e = 38; e <= 48; ++e) {
    BigInt v = boost::multiprecision::pow(BigInt(10), e / 2);
    if (e % 2) v = v * 31622776601683793LL / 10000000000000000LL;  // times sqrt(10)
    grid.push_back(v);
  }
  return grid;
}

}  // namespace qhe
