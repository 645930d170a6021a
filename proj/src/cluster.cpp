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

#include "ecv/cluster.hpp"

#include <algorithm>
#include <limits>

namespace ecv {

CommunityAssignment::CommunityAssignment(std::vector<int> labels, int k)
    : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) throw ParameterError("number of communities must be at least 1");
  for (int l : labels_) {
    if (l < 0 || l >= k_) throw ParameterError("label out of range");
  }
}

std::vector<Index> CommunityAssignment::sizes() const {
  std::vector<Index> s(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++s[static_cast<std::size_t>(l)];
  return s;
}

namespace {

inline double sqdist(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index t = 0; t < d; ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

// Points are the columns of x (d × n).
struct LloydRun {
  std::vector<int> labels;
  DenseMatrix centers;
  double wcss = 0.0;
  std::vector<double> trace;
};

DenseMatrix seed_plus_plus(const DenseMatrix& x, int k, Rng& rng) {
  const Index n = x.cols();
  DenseMatrix c(x.rows(), k);
  c.col(0) = x.col(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  const Index d = x.rows();
  for (Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sqdist(x.col(i).data(), c.col(0).data(), d);
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (double v : d2) total += v;
    Index pick = 0;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        r -= d2[static_cast<std::size_t>(i)];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    c.col(j) = x.col(pick);
    for (Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], sqdist(x.col(i).data(), c.col(j).data(), d));
    }
  }
  return c;
}

LloydRun lloyd(const DenseMatrix& x, int k, Rng& rng, int max_iter) {
  const Index n = x.cols();
  const auto kk = static_cast<std::size_t>(k);
  LloydRun run;
  run.centers = seed_plus_plus(x, k, rng);
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<Index> count(kk);
  const Index d = x.rows();

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const int cur = run.labels[ii];
      int best = cur >= 0 ? cur : 0;
      const double* xi = x.col(i).data();
      double best_d = sqdist(xi, run.centers.col(best).data(), d);
      for (int c = 0; c < k; ++c) {
        if (c == best) continue;
        const double dc = sqdist(xi, run.centers.col(c).data(), d);
        if (dc < best_d) {
          best = c;
          best_d = dc;
        }
      }
      if (best != cur) changed = true;
      run.labels[ii] = best;
      dist[ii] = best_d;
    }

    std::fill(count.begin(), count.end(), 0);
    for (int l : run.labels) ++count[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) continue;
      // Re-seed an empty cluster at the point farthest from its center.
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        if (count[static_cast<std::size_t>(run.labels[ii])] < 2) continue;
        if (far < 0 || dist[ii] > dist[static_cast<std::size_t>(far)]) far = i;
      }
      if (far < 0) break;
      const auto ff = static_cast<std::size_t>(far);
      --count[static_cast<std::size_t>(run.labels[ff])];
      run.labels[ff] = c;
      count[static_cast<std::size_t>(c)] = 1;
      dist[ff] = 0.0;
      changed = true;
    }

    DenseMatrix sums = DenseMatrix::Zero(x.rows(), k);
    for (Index i = 0; i < n; ++i) sums.col(run.labels[static_cast<std::size_t>(i)]) += x.col(i);
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) {
        run.centers.col(c) = sums.col(c) / static_cast<double>(count[static_cast<std::size_t>(c)]);
      }
    }
    double wcss = 0.0;
    for (Index i = 0; i < n; ++i) {
      wcss += sqdist(x.col(i).data(), run.centers.col(run.labels[static_cast<std::size_t>(i)]).data(), d);
    }
    run.wcss = wcss;
    run.trace.push_back(wcss);
    if (!changed) break;
  }
  return run;
}

void check_symmetric(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw ParameterError("spectral clustering needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw ParameterError("spectral clustering needs a symmetric matrix");
  }
}

// Directions with zero singular value carry no information; their columns
// are zeroed so a zero matrix embeds every node at the origin.
DenseMatrix informative_vectors(const DenseMatrix& u, const Vector& sigma, int k) {
  DenseMatrix v = u.leftCols(k);
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  for (int c = 0; c < k; ++c) {
    if (sigma(c) <= 1e-12 * top || top == 0.0) v.col(c).setZero();
  }
  return v;
}

}  // namespace

KMeansResult kmeans_detailed(const DenseMatrix& points, int k, Rng& rng,
                             const KMeansOptions& opts) {
  const Index n = points.rows();
  if (k < 1) throw ParameterError("k must be at least 1");
  if (k > n) throw ParameterError("k exceeds the number of points");
  if (opts.restarts < 1) throw ParameterError("restarts must be at least 1");
  const DenseMatrix x = points.transpose();

  KMeansResult best;
  bool have = false;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng run_rng = rng.split();
    LloydRun run = lloyd(x, k, run_rng, opts.max_iter);
    if (!have || run.wcss < best.wcss) {
      best.assignment = CommunityAssignment(std::move(run.labels), k);
      best.centers = run.centers.transpose();
      best.wcss = run.wcss;
      best.trace = std::move(run.trace);
      have = true;
    }
  }
  return best;
}

CommunityAssignment kmeans(const DenseMatrix& points, int k, Rng& rng,
                           const KMeansOptions& opts) {
  return kmeans_detailed(points, k, rng, opts).assignment;
}

CommunityAssignment cluster_embedding(const DenseMatrix& vectors, int k, bool spherical,
                                      Rng& rng, const KMeansOptions& opts) {
  if (k > vectors.cols()) throw ParameterError("embedding has fewer than k columns");
  if (k == 1) return CommunityAssignment(std::vector<int>(static_cast<std::size_t>(vectors.rows()), 0), 1);
  DenseMatrix rows = vectors.leftCols(k);
  if (spherical) {
    for (Index i = 0; i < rows.rows(); ++i) {
      const double norm = rows.row(i).norm();
      if (norm < 1e-12) {
        rows.row(i).setZero();
      } else {
        rows.row(i) /= norm;
      }
    }
  }
  return kmeans(rows, k, rng, opts);
}

CommunityAssignment spectral_clustering(const DenseMatrix& m, int k, Rng& rng,
                                        const KMeansOptions& opts) {
  check_symmetric(m);
  if (k < 1 || k > m.rows()) throw ParameterError("k out of range");
  const SvdResult svd = partial_svd(m, k, rng);
  return cluster_embedding(informative_vectors(svd.U, svd.sigma, k), k, false, rng, opts);
}

CommunityAssignment spectral_clustering(const CompletedMatrix& ahat, int k, Rng& rng,
                                        const KMeansOptions& opts) {
  if (k > ahat.rank()) throw ParameterError("k exceeds completion rank");
  return cluster_embedding(informative_vectors(ahat.U(), ahat.sigma(), k), k, false, rng, opts);
}

CommunityAssignment spherical_spectral_clustering(const DenseMatrix& m, int k, Rng& rng,
                                                  const KMeansOptions& opts) {
  check_symmetric(m);
  if (k < 1 || k > m.rows()) throw ParameterError("k out of range");
  const SvdResult svd = partial_svd(m, k, rng);
  return cluster_embedding(informative_vectors(svd.U, svd.sigma, k), k, true, rng, opts);
}

CommunityAssignment spherical_spectral_clustering(const CompletedMatrix& ahat, int k,
                                                  Rng& rng, const KMeansOptions& opts) {
  if (k > ahat.rank()) throw ParameterError("k exceeds completion rank");
  return cluster_embedding(informative_vectors(ahat.U(), ahat.sigma(), k), k, true, rng, opts);
}

}  // namespace ecv
