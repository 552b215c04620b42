// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "qhelab/perm_key.hpp"

using namespace qhe;

namespace {

// Moves column contents on a plain array the way the SWAP list would.
std::vector<std::size_t> apply_swaps(const PermKey& k) {
  std::vector<std::size_t> at(2 * k.m());
  for (std::size_t c = 0; c < at.size(); ++c) at[c] = c;
  for (const auto& [a, b] : k.swaps()) std::swap(at[a], at[b]);
  return at;  // at[position] = original column
}

GateList random_one_qubit_clifford(std::size_t depth, std::mt19937_64& rng) {
  GateList g;
  const GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::X, GateKind::Y, GateKind::Z};
  for (std::size_t i = 0; i < depth; ++i) g.push_back({kinds[rng() % 5], 0, 0});
  return g;
}

}  // namespace

TEST_CASE("perm keys: Lehmer codes, cycles, swaps") {
  for (Key i = 0; i < perm_key_count(2); ++i) {
    const auto k = PermKey::from_index(2, i);
    CHECK(k.index() == i);
    CHECK(PermKey::parse(2, k.str()) == k);
    const auto at = apply_swaps(k);
    for (std::size_t c = 0; c < 4; ++c) CHECK(at[k.image(c)] == c);
    CHECK(k.swaps().size() == k.swap_count());
  }
  CHECK(PermKey::identity(3).str() == "()");
  CHECK(PermKey::parse(2, "(0 3 2)").image(3) == 2);
  CHECK_THROWS(PermKey::parse(2, "(0 4)"));
  CHECK_THROWS(PermKey::parse(2, "(0 1)(1 2)"));
  CHECK_THROWS(PermKey::parse(2, "0 1"));
  CHECK_THROWS(PermKey::from_images({0, 0}));
  CHECK(perm_key_count(5) == 3628800);
  CHECK_THROWS(perm_key_count(11));

  std::mt19937_64 rng(1);
  std::vector<int> hits(perm_key_count(1), 0);
  for (int i = 0; i < 1000; ++i) ++hits[PermKey::random(1, rng).index()];
  CHECK(hits[0] > 400);
  CHECK(hits[1] > 400);
}

TEST_CASE("decryption complexity examples") {
  CHECK(decryption_complexity(PermKey::identity(4), 5) == 0);
  CHECK(decryption_complexity(PermKey::parse(2, "(0 1)"), 3) == 3);
  CHECK(decryption_complexity(PermKey::parse(4, "(0 1 2 3 4 5 6 7)"), 2) == 14);
}

TEST_CASE("security bound examples") {
  CHECK(security_bound(0, 1) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(security_bound(1, 2) == doctest::Approx(0.57735).epsilon(1e-5));
  CHECK(security_bound(0, 20) == doctest::Approx(1.0 / std::sqrt(137846528820.0)).epsilon(1e-10));
  CHECK(security_bound(0, 20) == doctest::Approx(2.6934e-6).epsilon(1e-4));
  for (std::size_t m = 1; m < 40; ++m) {
    CHECK(security_bound(3, m + 1) < security_bound(3, m));
    CHECK(security_bound(4, m) > security_bound(3, m));
  }
  CHECK(std::isfinite(security_bound(100, 2000)));
}

TEST_CASE("spreading examples against the dense oracle") {
  auto spread = [](std::size_t m, const DensityMatrix& plain) {
    auto rho = plain.tensor(DensityMatrix::maximally_mixed(m - 1));
    rho.apply_gates(spread_gates(m, 0));
    return rho;
  };
  CHECK(spread_gates(1).empty());
  CHECK(spread_gates(5).size() == 8);

  oracle::Mat want = oracle::Mat::Identity(32, 32);
  oracle::Mat zz = oracle::Z();
  for (int i = 1; i < 5; ++i) zz = oracle::kron(zz, oracle::Z());
  want = (want + zz) / 32.0;
  CHECK(oracle::max_abs(spread(5, DensityMatrix::named("0")).matrix() - want) < 1e-14);
  CHECK(oracle::max_abs(spread(5, DensityMatrix::maximally_mixed(1)).matrix() -
                        oracle::Mat::Identity(32, 32) / 32.0) < 1e-14);

  // General input: (1/2^m) sum_j a_j sigma_j^m.
  std::mt19937_64 rng(2);
  for (std::size_t m : {1u, 5u}) {
    const std::array<double, 3> bloch = {0.3, -0.5, 0.6};
    oracle::Mat rho1 = (oracle::I2() + bloch[0] * oracle::X() + bloch[1] * oracle::Y() + bloch[2] * oracle::Z()) / 2.0;
    oracle::Mat sum = oracle::Mat::Identity(1 << m, 1 << m);
    const oracle::Mat paulis[] = {oracle::X(), oracle::Y(), oracle::Z()};
    for (int j = 0; j < 3; ++j) {
      oracle::Mat t = paulis[j];
      for (std::size_t i = 1; i < m; ++i) t = oracle::kron(t, paulis[j]);
      sum += bloch[static_cast<std::size_t>(j)] * t;
    }
    sum /= static_cast<double>(1 << m);
    CHECK(oracle::max_abs(spread(m, DensityMatrix(1, rho1)).matrix() - sum) < 1e-14);
  }
}

TEST_CASE("perm encryption examples") {
  const PermutationKeyScheme s(1, 1);
  const auto plain = DensityMatrix::named("0");
  // Identity key: data stays in column 0, column 1 is mixed.
  const auto c0 = encrypt(s, PermKey::identity(1).index(), plain);
  CHECK(oracle::max_abs(c0.matrix() - oracle::kron(oracle::P0(), oracle::I2() / 2.0)) < 1e-15);
  // Two-key sweep.
  const auto avg = ciphertext_average(s, plain);
  oracle::Mat want = (oracle::kron(oracle::P0(), oracle::I2()) + oracle::kron(oracle::I2(), oracle::P0())) / 4.0;
  CHECK(oracle::max_abs(avg.matrix() - want) < 1e-15);
  CHECK(oracle::trace_distance(avg.matrix(), oracle::Mat::Identity(4, 4) / 4.0) <= security_bound(0, 1));
  for (Key k = 0; k < 2; ++k) {
    CHECK(trace_distance(decrypt(s.decryption(k, {}), encrypt(s, k, plain)), plain) < 1e-15);
  }
  CHECK(s.key_transport(1, {{GateKind::H, 0, 0}}) == 1);
}

TEST_CASE("exact perm security is below the bound") {
  const auto zero = DensityMatrix::named("0"), one = DensityMatrix::named("1");
  const auto d1 = security_delta(PermutationKeyScheme(1, 1), {zero, one});
  CHECK(d1.method == "exact-sweep");
  CHECK(d1.delta == doctest::Approx(0.5));
  CHECK(d1.delta <= security_bound(0, 1));
  const auto d2 = security_delta(PermutationKeyScheme(2, 1), {zero, one});
  CHECK(d2.delta == doctest::Approx(0.25));
  CHECK(d2.delta <= security_bound(0, 2));
  // One extra ancilla row (r = 1).
  const auto magic = DensityMatrix::named("T");
  const auto d3 =
      security_delta(PermutationKeyScheme(1, 2), {zero.tensor(magic), one.tensor(magic), DensityMatrix::named("+").tensor(magic)});
  CHECK(d3.delta <= security_bound(1, 1));
}

TEST_CASE("transversal clifford examples") {
  std::mt19937_64 rng(3);
  const PermutationKeyScheme s5(5, 1);
  const GateList h = {{GateKind::H, 0, 0}};
  for (int trial = 0; trial < 5; ++trial) {
    const Key key = rng() % s5.key_count();
    auto cipher = encrypt(s5, key, StabilizerState::zero_state(1));
    cipher.apply_gates(s5.lift(h));
    auto plain = decrypt(s5.decryption(key, h), cipher);
    CHECK(trace_distance(plain.to_density(), DensityMatrix::named("+")) < 1e-12);

    // S twice acts like Z.
    const GateList ss = {{GateKind::H, 0, 0}, {GateKind::S, 0, 0}, {GateKind::S, 0, 0}};
    const GateList hz = {{GateKind::H, 0, 0}, {GateKind::Z, 0, 0}};
    auto a = encrypt(s5, key, StabilizerState::zero_state(1));
    auto b = a;
    a.apply_gates(s5.lift(ss));
    b.apply_gates(s5.lift(hz));
    CHECK(decrypt(s5.decryption(key, ss), a).same_state(decrypt(s5.decryption(key, hz), b)));
  }
  CHECK(s5.allowed({{GateKind::S, 0, 0}}));
  CHECK_FALSE(PermutationKeyScheme(3, 1).allowed({{GateKind::S, 0, 0}}));
  CHECK(PermutationKeyScheme(3, 1).allowed({{GateKind::H, 0, 0}}));
  CHECK_FALSE(PermutationKeyScheme(2, 1).allowed({{GateKind::H, 0, 0}}));
  CHECK_FALSE(s5.allowed({{GateKind::T, 0, 0}}));
}

TEST_CASE("perm round trip on both backends") {
  std::mt19937_64 rng(4);
  const PermutationKeyScheme s1(1, 1), s5(5, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_one_qubit_clifford(1 + rng() % 10, rng);
    const Key k1 = rng() % s1.key_count();
    std::normal_distribution<double> g;
    double b[3] = {g(rng), g(rng), g(rng)};
    const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) * 1.1;
    const DensityMatrix rho(1, (oracle::I2() + (b[0] * oracle::X() + b[1] * oracle::Y() + b[2] * oracle::Z()) / norm) / 2.0);
    CHECK(oracle::trace_distance(round_trip(s1, k1, c, rho).matrix(),
                                 oracle::unitary(1, c) * rho.matrix() * oracle::unitary(1, c).adjoint()) < 1e-10);

    // m = 5 needs the tableau; inputs are random stabilizer states.
    auto st = StabilizerState::zero_state(1);
    st.apply_gates(random_one_qubit_clifford(5, rng));
    const Key k5 = rng() % s5.key_count();
    auto cipher = encrypt(s5, k5, st);
    cipher.apply_gates(s5.lift(c));
    const auto out = decrypt(s5.decryption(k5, c), cipher);
    const oracle::Mat in = st.to_density().matrix();
    CHECK(oracle::trace_distance(out.to_density().matrix(),
                                 oracle::unitary(1, c) * in * oracle::unitary(1, c).adjoint()) < 1e-10);
  }
}

TEST_CASE("qec commutation with trivial key transport") {
  const GateList enc = {{GateKind::CNOT, 0, 1}, {GateKind::CNOT, 0, 2}};
  const PermutationKeyScheme s(1, 3);
  for (Key k = 0; k < s.key_count(); ++k) {
    const auto r = check_qec_commutation(s, enc, {{GateKind::H, 1, 0}}, k);
    CHECK(r.holds);
    CHECK(r.lambda == k);
    CHECK(r.lambda_sharp == k);
  }
}

TEST_CASE("probabilistic T gate") {
  std::mt19937_64 rng(5);
  int successes = 0;
  const int trials = 10000;
  auto plus = DensityMatrix::named("+");
  auto t_plus = plus, tdg_plus = plus;
  t_plus.apply_gate({GateKind::T, 0, 0});
  tdg_plus.apply_gate({GateKind::TDG, 0, 0});
  for (int i = 0; i < trials; ++i) {
    SpreadRegister<DensityMatrix> reg(PermKey::random(1, rng));
    const auto id = reg.add_rows(plus, RowRole::Data).front();
    const auto out = t_gate_probabilistic(reg, id, rng);
    successes += out.success;
    CHECK(reg.r() == 1);
    if (i < 200) CHECK(trace_distance(reg.decrypt({id}), out.success ? t_plus : tdg_plus) < 1e-10);
  }
  const double rate = static_cast<double>(successes) / trials;
  CHECK(rate >= 0.48);
  CHECK(rate <= 0.52);
}

TEST_CASE("deterministic T gate") {
  std::mt19937_64 rng(6);
  auto plus = DensityMatrix::named("+");
  auto t_plus = plus;
  t_plus.apply_gate({GateKind::T, 0, 0});
  int ones = 0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    SpreadRegister<DensityMatrix> reg(PermKey::random(1, rng));
    const auto id = reg.add_rows(plus, RowRole::Data).front();
    Transcript tr;
    const auto out = t_gate_deterministic(reg, id, rng, &tr);
    CHECK(trace_distance(reg.decrypt({id}), t_plus) < 1e-10);
    CHECK(reg.rows() == 1);
    CHECK(reg.r() == 3);
    ones += static_cast<int>(*out.label);
    CHECK(tr.count(MessageKind::ClassicalBits) == 2);
  }
  // Chi-square, one degree of freedom, p > 0.01.
  const double e = runs / 2.0;
  const double chi2 = 2 * (ones - e) * (ones - e) / e;
  CHECK(chi2 < 6.635);

  SpreadRegister<DensityMatrix> reg(PermKey::random(1, rng));
  const auto id = reg.add_rows(DensityMatrix::named("0"), RowRole::Data).front();
  t_gate_deterministic(reg, id, rng);
  CHECK(trace_distance(reg.decrypt({id}), DensityMatrix::named("0")) < 1e-10);

  SpreadRegister<DensityMatrix> bad(PermKey::identity(3));
  CHECK_THROWS_AS(t_gate_deterministic(bad, 0, rng), NotAllowed);
}

TEST_CASE("server transcripts do not depend on the plaintext") {
  std::mt19937_64 rng(7);
  const int runs = 10000;
  std::array<std::array<double, 4>, 2> hist{};
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < runs; ++i) {
      SpreadRegister<DensityMatrix> reg(PermKey::random(1, rng));
      const auto id = reg.add_rows(DensityMatrix::named(b ? "1" : "0"), RowRole::Data).front();
      const auto out = t_gate_probabilistic(reg, id, rng);
      hist[static_cast<std::size_t>(b)][static_cast<std::size_t>(out.bits[0] * 2 + out.bits[1])] += 1.0 / runs;
    }
  }
  double tv = 0;
  for (std::size_t i = 0; i < 4; ++i) tv += 0.5 * std::abs(hist[0][i] - hist[1][i]);
  CHECK(tv < 0.02);
}

TEST_CASE("concatenated code logicals") {
  const GateList enc = {{GateKind::CNOT, 0, 1}, {GateKind::CNOT, 0, 2}};
  const auto c1 = build_concatenated_code(3, enc, PauliString::parse("XXX"), PauliString::parse("ZII"), 1);
  CHECK(c1.logical_x == PauliString::parse("XIXIXI"));
  CHECK(c1.logical_z == PauliString::parse("ZIIIII"));
  const auto c5 = build_concatenated_code(3, enc, PauliString::parse("XXX"), PauliString::parse("ZII"), 5);
  CHECK(c5.logical_x.weight() == 15);
  CHECK_THROWS_AS(build_concatenated_code(1, {{GateKind::T, 0, 0}}, PauliString::parse("X"), PauliString::parse("Z"), 1),
                  NotAllowed);
  // Trivial inner code reduces to plain spreading.
  const auto triv = build_concatenated_code(1, {}, PauliString::parse("X"), PauliString::parse("Z"), 5);
  CHECK(triv.logical_z == PauliString::parse("ZZZZZIIIII"));

  // Logicals act as X_L, Z_L on an encoded (unpermuted) register.
  SpreadRegister<StabilizerState> reg(PermKey::identity(5));
  const auto ids = reg.add_rows(inner_encode(c5, StabilizerState::zero_state(1)), RowRole::Data);
  CHECK(reg.state().eigenvalue(c5.logical_z) == 1);
  auto s = reg.state();
  s.apply_pauli(c5.logical_x);
  CHECK(s.eigenvalue(c5.logical_z) == -1);
  CHECK(ids.size() == 3);
}

TEST_CASE("encrypted syndrome extraction and correction") {
  const GateList enc = {{GateKind::CNOT, 0, 1}, {GateKind::CNOT, 0, 2}};
  const std::vector<PauliString> stabs = {PauliString::parse("ZZI"), PauliString::parse("IZZ")};
  std::mt19937_64 rng(8);
  for (std::size_t m : {1u, 5u}) {
    const auto code = build_concatenated_code(3, enc, PauliString::parse("XXX"), PauliString::parse("ZII"), m);
    for (const char* plain_name : {"0", "1", "+"}) {
      auto plain = StabilizerState::zero_state(1);
      if (std::string(plain_name) == "1") plain.apply_gate({GateKind::X, 0, 0});
      if (std::string(plain_name) == "+") plain.apply_gate({GateKind::H, 0, 0});
      const auto encoded = inner_encode(code, plain);
      for (int err_row = -1; err_row < 3; ++err_row) {
        SpreadRegister<StabilizerState> reg(PermKey::random(m, rng));
        const auto rows = reg.add_rows(encoded, RowRole::Data);
        if (err_row >= 0) {
          // Bit flip on one data-carrying column.
          const std::size_t col = reg.key().data_columns()[rng() % m];
          reg.apply_physical({{GateKind::X, reg.qubit(rows[static_cast<std::size_t>(err_row)], col), 0}});
        }
        Transcript tr;
        const int s0 = encrypted_syndrome_round(reg, rows, stabs[0], rng, &tr);
        const int s1 = encrypted_syndrome_round(reg, rows, stabs[1], rng, &tr);
        const int want0 = err_row == 0 || err_row == 1, want1 = err_row == 1 || err_row == 2;
        CHECK(s0 == want0);
        CHECK(s1 == want1);
        const int flip = s0 && !s1 ? 0 : (s0 && s1 ? 1 : (!s0 && s1 ? 2 : -1));
        for (int row = 0; row < 3; ++row) {
          encrypted_conditional_pauli(reg, rows[static_cast<std::size_t>(row)], 'X', row == flip, rng, &tr);
        }
        CHECK(reg.r() == 2 + 6);
        CHECK(reg.decrypt(rows).same_state(encoded));
      }
    }
  }
}
