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

#include "ecv/core.hpp"
#include "ecv/lowrank.hpp"
#include "ecv/rng.hpp"

namespace ecv {

/// Community labels in [0, K).
class CommunityAssignment {
 public:
  CommunityAssignment() = default;
  CommunityAssignment(std::vector<int> labels, int k);

  int K() const noexcept { return k_; }
  Index n() const noexcept { return static_cast<Index>(labels_.size()); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  int operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// Node counts per label.
  std::vector<Index> sizes() const;

  friend bool operator==(const CommunityAssignment&, const CommunityAssignment&) = default;

 private:
  std::vector<int> labels_;
  int k_ = 1;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
};

struct KMeansResult {
  CommunityAssignment assignment;
  DenseMatrix centers;
  double wcss = 0.0;
  /// Objective after each Lloyd iteration of the winning restart.
  std::vector<double> trace;
};

/// Lloyd's algorithm with k-means++ seeding on the rows of `points`; the
/// best of `restarts` runs by within-cluster sum of squares is returned.
KMeansResult kmeans_detailed(const DenseMatrix& points, int k, Rng& rng,
                             const KMeansOptions& opts = {});
CommunityAssignment kmeans(const DenseMatrix& points, int k, Rng& rng,
                           const KMeansOptions& opts = {});

/// k-means on the rows of the n×K leading singular vector matrix.
CommunityAssignment spectral_clustering(const DenseMatrix& m, int k, Rng& rng,
                                        const KMeansOptions& opts = {});
/// Reuses the completion factors; k must not exceed ahat.rank().
CommunityAssignment spectral_clustering(const CompletedMatrix& ahat, int k,
                                        Rng& rng, const KMeansOptions& opts = {});

/// As spectral_clustering, with each row scaled to unit length first. Rows
/// of norm below 1e-12 stay zero.
CommunityAssignment spherical_spectral_clustering(const DenseMatrix& m, int k,
                                                  Rng& rng,
                                                  const KMeansOptions& opts = {});
CommunityAssignment spherical_spectral_clustering(const CompletedMatrix& ahat,
                                                  int k, Rng& rng,
                                                  const KMeansOptions& opts = {});

/// Clusters the rows of `vectors` (first k columns), optionally row-normalized.
CommunityAssignment cluster_embedding(const DenseMatrix& vectors, int k,
                                      bool spherical, Rng& rng,
                                      const KMeansOptions& opts = {});

}  // namespace ecv
