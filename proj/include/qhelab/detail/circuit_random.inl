// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

namespace qhe {

template <class Rng>
Circuit random_clifford_circuit(std::size_t n, std::size_t depth, Rng& rng) {
  static constexpr GateKind kOne[] = {GateKind::H, GateKind::S, GateKind::X, GateKind::Y,
                                      GateKind::Z};
  static constexpr GateKind kTwo[] = {GateKind::CNOT, GateKind::CZ, GateKind::SWAP};
  Circuit c(n);
  std::uniform_int_distribution<std::size_t> pick_q(0, n - 1);
  std::uniform_int_distribution<int> pick_one(0, 4);
  std::uniform_int_distribution<int> pick_two(0, 2);
  std::bernoulli_distribution two_qubit(n > 1 ? 0.4 : 0.0);
  for (std::size_t i = 0; i < depth; ++i) {
    if (two_qubit(rng)) {
      std::size_t a = pick_q(rng);
      std::size_t b = pick_q(rng);
      while (b == a) b = pick_q(rng);
      c.add_gate(kTwo[pick_two(rng)], a, b);
    } else {
      c.add_gate(kOne[pick_one(rng)], pick_q(rng));
    }
  }
  return c;
}

}  // namespace qhe
