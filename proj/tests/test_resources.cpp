// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhelab/perm_key.hpp"
#include "qhelab/resources.hpp"

using namespace qhe;

namespace {

BigInt pow10(unsigned e) { return boost::multiprecision::pow(BigInt(10), e); }

ResourceParams small(BigInt n_total, unsigned k, unsigned depth = 0) {
  ResourceParams p;
  p.n_total = std::move(n_total);
  p.k = k;
  p.depth = depth;
  return p;
}

}  // namespace

TEST_CASE("min_t examples") {
  const auto p = fig5_params();
  CHECK(min_t(p) == 11);

  ResourceParams edge = p;
  edge.p_target = edge.a_coeff * (edge.p0 / edge.p_threshold);
  CHECK(min_t(edge) == 1);

  ResourceParams bad = p;
  bad.p0 = bad.p_threshold;
  CHECK_THROWS_AS(min_t(bad), std::invalid_argument);
  bad = p;
  bad.p_target = 1.5;
  CHECK_THROWS_AS(min_t(bad), std::invalid_argument);
}

TEST_CASE("min_t is minimal") {
  for (double p0 : {1e-6, 1e-5, 3e-4}) {
    for (double target : {1e-30, 1e-15, 1e-9, 1e-4}) {
      ResourceParams p = fig5_params();
      p.p0 = p0;
      p.p_target = target;
      const unsigned t = min_t(p);
      const double ratio = p.p0 / p.p_threshold;
      CHECK(p.a_coeff * std::pow(ratio, t) <= target * (1 + 1e-12));
      if (t > 1) CHECK(p.a_coeff * std::pow(ratio, t - 1) > target);
    }
  }
}

TEST_CASE("ancilla counts") {
  CHECK(ancilla_count(9, 1) == 0);
  CHECK(ancilla_count(12345, 1) == 0);
  CHECK(ancilla_count(25, 2) == 3300);
  CHECK(ancilla_count(529, 11) == BigInt(430140480));
  for (unsigned t = 1; t <= 40; ++t) {
    const BigInt n = BigInt(2 * t + 1) * (2 * t + 1);
    const BigInt bt = t;
    CHECK(ancilla_count(n, t) <= bt * bt * bt * n * (bt * bt + 2 * bt + n));
  }
  CHECK_THROWS_AS(ancilla_count(9, 0), std::invalid_argument);
}

TEST_CASE("total qubits") {
  CHECK(total_qubits(1, 1, 0, 0) == 2);
  CHECK(total_qubits(2, 1, 1, 3300) == 79204);
  CHECK(total_qubits(4, 3, 2, 17) == 2 * total_qubits(2, 3, 2, 17));
  // Exact beyond 64 bits.
  const BigInt big = total_qubits(BigInt(1) << 40, BigInt(1) << 20, 1, 430140480);
  CHECK(big == (BigInt(1) << 61) * (1 + 6 * BigInt(430140480)));
}

TEST_CASE("security after QEC") {
  CHECK(security_after_qec(5, 3, 0, 20) == doctest::Approx(security_bound(5, 20)));
  CHECK(security_after_qec(1, 1, 1, 50) == doctest::Approx(security_bound(7, 50)));
  double prev = HUGE_VAL;
  for (unsigned m = 1; m <= 200; ++m) {
    const double d = security_after_qec(2, 1, 3, m);
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("max_power examples") {
  const auto plan = plan_with_t(small(10000, 10), 1);
  CHECK(plan.a_nt == 0);
  CHECK(plan.m == 55);
  REQUIRE(plan.r_approx);
  CHECK(*plan.r_approx == doctest::Approx(90.4988).epsilon(1e-4));
  CHECK(plan.r_bound == 90);
  CHECK(plan.n_tot_used <= plan.n_total);
  CHECK(plan.m_rule == "optimal-m");

  // Large A with a small budget.
  auto p = fig5_params();
  p.n_total = 1000000;
  CHECK_THROWS_AS(max_power(p), Infeasible);

  auto q = fig5_params();
  q.n_total = pow10(22);
  const auto fig = max_power(q);
  CHECK(fig.t == 11);
  CHECK(fig.n == 529);
  CHECK(fig.a_nt == BigInt(430140480));
  CHECK(fig.r_bound >= 1);
  CHECK(fig.n_tot_used <= fig.n_total);
}

TEST_CASE("r_max grows as sqrt(N)") {
  for (BigInt n : {BigInt(1000000), BigInt(100000000), BigInt(10000000000LL)}) {
    const auto r1 = plan_with_t(small(n, 10), 1).r_bound;
    const auto r4 = plan_with_t(small(4 * n, 10), 1).r_bound;
    const double ratio = r4.convert_to<double>() / r1.convert_to<double>();
    CHECK(std::abs(ratio - 2) < 0.1);
  }
}

TEST_CASE("m-constraint rule") {
  ResourceParams p;
  p.n_total = 1000;
  p.depth = 0;
  p.s = 3;
  const auto plan = plan_with_t(p, 1);
  CHECK(plan.m_rule == "m-constraint");
  CHECK(plan.m == 166);
  CHECK(plan.r_bound == 3);
  CHECK_FALSE(plan.r_approx);
  p.n_total = 5;
  CHECK_THROWS_AS(plan_with_t(p, 1), Infeasible);
}

TEST_CASE("tradeoff sweep") {
  const auto rows = tradeoff_sweep(fig5_params(), fig5_grid());
  CHECK(rows.size() == fig5_grid().size());
  BigInt prev = 0;
  bool any_feasible = false;
  for (const auto& r : rows) {
    CHECK(r.t == 11);
    CHECK(r.r_bound >= prev);
    prev = r.r_bound;
    if (r.feasible) {
      any_feasible = true;
      CHECK(r.n_tot_used <= r.n_total);
    }
  }
  CHECK(any_feasible);

  CHECK(tradeoff_sweep(fig5_params(), {pow10(22)}).size() == 1);
  CHECK_THROWS_AS(tradeoff_sweep(fig5_params(), {}), std::invalid_argument);

  auto k10 = fig5_params(), k_big = fig5_params();
  k_big.k = 4000000000u;
  const BigInt n = pow10(24);
  CHECK(tradeoff_sweep(k_big, {n})[0].r_bound < tradeoff_sweep(k10, {n})[0].r_bound);

  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind("N_tot,k,t,n,A_nt,m,r_bound,r_approx,delta_bar_log2,m_rule,feasible\n", 0) == 0);
  const auto j = nlohmann::json::parse(sweep_json(rows));
  CHECK(j.size() == rows.size());
  CHECK(j[0]["A_nt"] == 430140480);
}

TEST_CASE("csv and json carry the same numbers") {
  const auto rows = tradeoff_sweep(fig5_params(), fig5_grid());
  const auto j = nlohmann::json::parse(sweep_json(rows));
  std::istringstream csv(sweep_csv(rows));
  std::string line;
  std::getline(csv, line);
  const char* cols[] = {"N_tot", "k", "t", "n", "A_nt", "m", "r_bound", "r_approx", "delta_bar_log2", "m_rule",
                        "feasible"};
  for (const auto& row : j) {
    REQUIRE(std::getline(csv, line));
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    REQUIRE(cells.size() == 11);
    for (std::size_t c = 0; c < 11; ++c) {
      const auto& v = row[cols[c]];
      std::string expect = v.is_null() ? "" : v.is_string() ? v.get<std::string>() : v.dump();
      if (!row["feasible"].get<bool>() && c == 8) expect = "";
      CHECK_MESSAGE(cells[c] == expect, cols[c]);
    }
  }
}

TEST_CASE("parse_count") {
  CHECK(parse_count("5000") == 5000);
  CHECK(parse_count("1e22") == pow10(22));
  CHECK(parse_count("3.5e6") == 3500000);
  CHECK(parse_count("1.50E2") == 150);
  CHECK_THROWS_AS(parse_count("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_count("-3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_count("1e"), std::invalid_argument);
  CHECK_THROWS_AS(parse_count("abc"), std::invalid_argument);
}
