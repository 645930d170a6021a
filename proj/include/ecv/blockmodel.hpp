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

#include <vector>

#include "ecv/cluster.hpp"
#include "ecv/core.hpp"
#include "ecv/holdout.hpp"
#include "ecv/netgraph.hpp"

namespace ecv {

enum class BlockModelKind { kSBM, kDCSBM };

/// Block model parameters estimated from the training pairs.
///
/// SBM: `block` holds B̂ and P̂_ij = B̂[c_i, c_j].
/// DCSBM: `block` holds Ô* and P̂_ij = θ̂_i θ̂_j Ô*[c_i, c_j] / p.
struct FittedBlockModel {
  BlockModelKind kind = BlockModelKind::kSBM;
  CommunityAssignment labels;
  DenseMatrix block;
  std::vector<double> theta;
  double p = 1.0;

  double probability(Index i, Index j) const {
    const int a = labels[i];
    const int b = labels[j];
    if (kind == BlockModelKind::kSBM) return block(a, b);
    return theta[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(j)] * block(a, b) / p;
  }
};

/// B̂_kl = (A-weight on Ω pairs between k and l) / n̂^Ω_kl, where each
/// unordered pair counts once. Empty pair classes give B̂_kl = 0.
FittedBlockModel estimate_sbm(const AdjacencyMatrix& a, const HoldoutMask& mask,
                              const CommunityAssignment& labels);

/// Poisson-approximation DCSBM fit on Ω, scaled by 1/p.
FittedBlockModel estimate_dcsbm(const AdjacencyMatrix& a, const HoldoutMask& mask,
                                const CommunityAssignment& labels);

/// n×n matrix of P̂_ij with a zero diagonal. Entries above 1 are kept.
DenseMatrix probability_matrix(const FittedBlockModel& model);

}  // namespace ecv
