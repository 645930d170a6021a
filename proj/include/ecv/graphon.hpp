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

#pragma once

#include "ecv/core.hpp"

namespace ecv {

struct SmootherConfig {
  /// Neighborhood quantile in (0, 1).
  double h = 0.1;
  bool symmetrize = true;
};

/// h = τ √(log n / n).
double smoothing_bandwidth(double tau, Index n);

/// Neighborhood smoothing estimate of an edge-probability matrix.
///
/// Row distances d(i, i')² = max_{k ≠ i, i'} |(W²/n)_{ik} − (W²/n)_{i'k}|
/// are computed once; smooth() can then be called for any number of
/// bandwidths. Node i's neighborhood is every i' ≠ i within the
/// nearest-rank h-quantile of its distances, and P̃_ij averages W_{i'j}
/// over that neighborhood.
class NeighborhoodSmoother {
 public:
  explicit NeighborhoodSmoother(DenseMatrix w);

  Index n() const noexcept { return w_.rows(); }
  /// Squared distances d(i, i')².
  const DenseMatrix& distances() const noexcept { return dist_; }

  DenseMatrix smooth(const SmootherConfig& cfg) const;

 private:
  DenseMatrix w_;
  DenseMatrix dist_;
};

DenseMatrix neighborhood_smoothing(const DenseMatrix& w, const SmootherConfig& cfg);

}  // namespace ecv
