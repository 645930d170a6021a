// Copyright 2026 The ecvnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ecv/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ecv {

double smoothing_bandwidth(double tau, Index n) {
  if (n < 2) throw ParameterError("bandwidth needs n >= 2");
  const auto nn = static_cast<double>(n);
  return tau * std::sqrt(std::log(nn) / nn);
}

NeighborhoodSmoother::NeighborhoodSmoother(DenseMatrix w) : w_(std::move(w)) {
  const Index n = w_.rows();
  if (w_.cols() != n) throw ParameterError("smoothing needs a square matrix");
  if (n < 3) throw ParameterError("smoothing needs at least three nodes");
  if ((w_ - w_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ParameterError("smoothing needs a symmetric matrix");
  }
  DenseMatrix s = (w_ * w_) / static_cast<double>(n);
  dist_ = DenseMatrix::Zero(n, n);
  // s is symmetric, so row i of s is column i.
  for (Index i = 0; i < n; ++i) {
    const auto ci = s.col(i);
    for (Index j = i + 1; j < n; ++j) {
      const auto cj = s.col(j);
      double m = 0.0;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        m = std::max(m, std::abs(ci(k) - cj(k)));
      }
      dist_(i, j) = dist_(j, i) = m;
    }
  }
}

DenseMatrix NeighborhoodSmoother::smooth(const SmootherConfig& cfg) const {
  if (!(cfg.h > 0.0 && cfg.h < 1.0)) throw ParameterError("bandwidth h must lie in (0, 1)");
  const Index n = w_.rows();
  const auto others = static_cast<std::size_t>(n - 1);
  const auto rank = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(cfg.h * static_cast<double>(others))), 1, others);

  DenseMatrix weights = DenseMatrix::Zero(n, n);
  std::vector<double> d;
  d.reserve(others);
  for (Index i = 0; i < n; ++i) {
    d.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) d.push_back(dist_(i, j));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(rank - 1), d.end());
    const double q = d[rank - 1];
    Index members = 0;
    for (Index j = 0; j < n; ++j) {
      if (j != i && dist_(i, j) <= q) {
        weights(i, j) = 1.0;
        ++members;
      }
    }
    weights.row(i) /= static_cast<double>(members);
  }
  DenseMatrix p = weights * w_;
  if (cfg.symmetrize) p = (0.5 * (p + p.transpose())).eval();
  return p.cwiseMax(0.0).cwiseMin(1.0);
}

DenseMatrix neighborhood_smoothing(const DenseMatrix& w, const SmootherConfig& cfg) {
  return NeighborhoodSmoother(w).smooth(cfg);
}

}  // namespace ecv
