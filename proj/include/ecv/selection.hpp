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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecv/cluster.hpp"
#include "ecv/core.hpp"
#include "ecv/holdout.hpp"
#include "ecv/lowrank.hpp"
#include "ecv/netgraph.hpp"

namespace ecv {

enum class Family { kSBM, kDCSBM, kRank, kTauReg, kTauGraphon };

std::string_view family_name(Family f);

/// One candidate model: a family plus its integer K or real τ.
struct CandidateId {
  Family family = Family::kRank;
  double value = 1.0;

  bool integral() const noexcept {
    return family == Family::kSBM || family == Family::kDCSBM || family == Family::kRank;
  }
  int K() const { return static_cast<int>(value); }

  friend bool operator==(const CandidateId&, const CandidateId&) = default;
};

CandidateId sbm(int k);
CandidateId dcsbm(int k);
CandidateId rank_candidate(int k);

/// "SBM-3", "DCSBM-2", "K=4", "tau=0.5".
std::string to_string(const CandidateId& c);

/// Parsimony order: smaller value first, then SBM before DCSBM.
bool simpler(const CandidateId& a, const CandidateId& b);

enum class LossKind { kL2, kDeviance, kAUC };

/// Accepts l2, sse, deviance, dev, auc.
LossKind parse_loss(std::string_view name);
std::string_view loss_name(LossKind loss);

/// Completion settings used inside the drivers. The leading triplets are
/// still accurate to near machine precision; triplets inside the noise bulk
/// stop at a residual of 1e-4 σ₁.
inline constexpr SvdOptions kEcvSvdOptions{4, 1e-4};

struct EcvConfig {
  double p = 0.9;
  int n_splits = 3;
  std::uint64_t seed = 1;
  SvdOptions svd = kEcvSvdOptions;
  KMeansOptions kmeans;
};

/// Outcome of one ECV run over a candidate menu.
struct SelectionResult {
  std::vector<CandidateId> candidates;
  /// N × Q; NaN marks a missing loss.
  DenseMatrix losses;
  /// NaN for candidates missing in every split.
  std::vector<double> mean_loss;
  CandidateId chosen;
  /// Filled by repeat_selection.
  std::vector<CandidateId> per_rep_choices;

  double chosen_loss() const;
};

/// Mean over non-missing splits and argmin with the parsimony tie rule.
/// Throws when every candidate is missing everywhere.
void finalize(SelectionResult& result);

/// Predictions for the held-out pairs of `mask` (in held_out_pairs() order).
using PredictFn = std::function<std::vector<double>(
    const CompletedMatrix& ahat, const HoldoutMask& mask,
    const CandidateId& candidate, Rng& rng)>;
/// Completion rank to use for a candidate.
using RankFn = std::function<Index(const CandidateId& candidate)>;

/// The general procedure: N random pair splits, completion of each training
/// matrix, one fit per candidate, held-out loss averaged over splits. The
/// training matrix is completed once at the largest requested rank and
/// truncated per candidate. A callback that throws records a missing loss.
SelectionResult ecv_generic(const AdjacencyMatrix& a,
                            std::span<const CandidateId> candidates,
                            const RankFn& rank_of, const PredictFn& predict,
                            LossKind loss, const EcvConfig& cfg);

/// SBM-K and DCSBM-K for K = 1..kmax. One result per requested loss, all
/// computed from the same splits and fits. Undirected networks only.
std::vector<SelectionResult> select_block_model(const AdjacencyMatrix& a, int kmax,
                                                std::span<const LossKind> losses,
                                                const EcvConfig& cfg);
SelectionResult select_block_model(const AdjacencyMatrix& a, int kmax,
                                   LossKind loss, const EcvConfig& cfg);

/// Rank K = 1..kmax scored directly on the completed entries. AUC is stored
/// as 1 − AUC. Works for directed networks.
std::vector<SelectionResult> select_rank(const AdjacencyMatrix& a, int kmax,
                                         std::span<const LossKind> losses,
                                         const EcvConfig& cfg);
SelectionResult select_rank(const AdjacencyMatrix& a, int kmax, LossKind loss,
                            const EcvConfig& cfg);

/// Regularized spectral clustering: leading k singular vectors of the
/// normalized Laplacian of regularize(W, τ), then k-means.
CommunityAssignment regularized_spectral_clustering(const DenseMatrix& w, double tau,
                                                    int k, Rng& rng,
                                                    const KMeansOptions& opts = {});

struct RegularizationTuning {
  SelectionResult selection;
  /// Labels from the full network for each distinct grid value, in
  /// selection.candidates order.
  std::vector<CommunityAssignment> full_labels;

  const CommunityAssignment& chosen_labels() const;
};

/// Picks τ by the co-clustering difference between split-wise and
/// full-data partitions on the held-out pairs. Duplicate grid values are
/// merged.
RegularizationTuning tune_regularization(const AdjacencyMatrix& a,
                                         std::span<const double> tau_grid, int k,
                                         const EcvConfig& cfg);

/// Picks τ for neighborhood smoothing (h = τ √(log n / n)). Each split picks
/// its completion rank in 1..kmax by held-out squared error, clips the
/// completed matrix to [0, 1], smooths it and scores the held-out pairs.
/// τ values giving h outside (0, 1) are missing.
SelectionResult tune_graphon(const AdjacencyMatrix& a, std::span<const double> tau_grid,
                             int kmax, const EcvConfig& cfg);

enum class StabilityMode { kMostFrequent, kAverage };

/// Modal choice (ties to the simpler candidate) or the average value.
/// Averages of K are rounded half up; averages of τ are not rounded.
CandidateId stability_select(std::span<const CandidateId> choices, StabilityMode mode);

/// Runs `select` with `reps` seeds: `seed` itself, then seeds derived from
/// it. Returns the first run with per_rep_choices holding every run's choice.
SelectionResult repeat_selection(const std::function<SelectionResult(std::uint64_t)>& select,
                                 int reps, std::uint64_t seed);

}  // namespace ecv
