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

#include <span>
#include <vector>

#include "ecv/cluster.hpp"
#include "ecv/core.hpp"

namespace ecv {

/// Held-out pairs with observed values and predictions.
struct PairScoreSet {
  std::vector<NodePair> pairs;
  std::vector<double> truths;
  std::vector<double> preds;

  PairScoreSet() = default;
  PairScoreSet(std::vector<NodePair> pairs, std::vector<double> truths,
               std::vector<double> preds);
  /// Without pair indices; for metric-only use.
  PairScoreSet(std::vector<double> truths, std::vector<double> preds);

  std::size_t size() const noexcept { return truths.size(); }
};

inline constexpr double kDevianceClip = 1e-6;

/// Mean squared error over the held-out pairs.
double sse_loss(const PairScoreSet& s);
double sse_loss(std::span<const double> truths, std::span<const double> preds);

/// Mean binomial deviance with predictions clipped to [1e-6, 1 - 1e-6].
double deviance_loss(const PairScoreSet& s);
double deviance_loss(std::span<const double> truths, std::span<const double> preds);

/// Mann-Whitney AUC with average ranks for ties. Throws when the truths
/// contain a single class.
double auc(const PairScoreSet& s);
double auc(std::span<const double> truths, std::span<const double> preds);

/// Co-clustering difference between the pair partitions induced by two
/// labelings, restricted to `pairs`. Computed from class counts.
double ccd(const CommunityAssignment& a, const CommunityAssignment& b,
           std::span<const NodePair> pairs);

double nmi(const CommunityAssignment& a, const CommunityAssignment& b);

/// Fraction of nodes matched under the best label permutation.
double clustering_accuracy(const CommunityAssignment& est,
                           const CommunityAssignment& truth);

/// Minimum-cost perfect assignment on a square cost matrix; returns the
/// column assigned to each row.
std::vector<int> hungarian_assignment(const DenseMatrix& cost);

}  // namespace ecv
