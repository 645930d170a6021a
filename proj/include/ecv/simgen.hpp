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

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "ecv/cluster.hpp"
#include "ecv/core.hpp"
#include "ecv/netgraph.hpp"
#include "ecv/rng.hpp"

namespace ecv {

/// Planted-partition design. Community proportions ∝ (1, 2^t, ..., K^t),
/// B₀ = (1 − β) I + β 1 1ᵀ, and the overall scale is set so the expected
/// mean degree is λ.
struct BlockDesign {
  Index n = 600;
  int K = 3;
  double lambda = 40.0;
  double t = 0.0;
  double beta = 0.2;
  bool degree_corrected = false;
};

struct PlantedInstance {
  AdjacencyMatrix A;
  std::optional<CommunityAssignment> truth;
  DenseMatrix M;
  /// Share of off-diagonal entries of s·θθᵀ∘B that exceeded 1 and were clipped.
  double clip_fraction = 0.0;
  /// Set when more than half the entries needed clipping.
  bool infeasible = false;
};

/// Largest-remainder rounding of n·π with π ∝ (1, 2^t, ..., K^t).
std::vector<Index> community_sizes(Index n, int k, double t);

/// Power-law draw with density 4 x^{-5} on [1, ∞).
double sample_power_law(Rng& rng);

PlantedInstance gen_block_model(const BlockDesign& design, Rng& rng);

/// M = S₁S₂ᵀ / max(S₁S₂ᵀ) with uniform S₁, S₂ ∈ [0,1]^{n×K}; every ordered
/// off-diagonal pair is an independent Bernoulli draw.
PlantedInstance gen_rdpg_directed(Index n, int k, Rng& rng);

enum class GraphonKind { kPiecewiseK3, kSmoothRankFull };

GraphonKind parse_graphon_kind(std::string_view name);
std::string_view graphon_name(GraphonKind kind);

/// The graphon function f(u, v).
double graphon_value(GraphonKind kind, double u, double v);

/// ξ_i ~ U[0,1], M_ij = f(ξ_i, ξ_j), A symmetric Bernoulli.
PlantedInstance gen_graphon(Index n, GraphonKind kind, Rng& rng);

/// Sidecar truth file: one "node label" line per node.
void write_truth(std::ostream& out, const CommunityAssignment& truth);

}  // namespace ecv
