// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace qhe {

template <class F1, class F2>
double channel_deviation(std::size_t n, F1&& phi1, F2&& phi2) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      const DensityMatrix in(n, e);
      const DensityMatrix a = phi1(in);
      const DensityMatrix b = phi2(in);
      worst = std::max(worst, (a.matrix() - b.matrix()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace qhe
