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

#include "ecv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ecv {

PairScoreSet::PairScoreSet(std::vector<NodePair> p, std::vector<double> t,
                           std::vector<double> q)
    : pairs(std::move(p)), truths(std::move(t)), preds(std::move(q)) {
  if (pairs.size() != truths.size() || truths.size() != preds.size()) {
    throw ParameterError("pair score set has mismatched lengths");
  }
}

PairScoreSet::PairScoreSet(std::vector<double> t, std::vector<double> q)
    : truths(std::move(t)), preds(std::move(q)) {
  if (truths.size() != preds.size()) throw ParameterError("pair score set has mismatched lengths");
}

namespace {

void check_lengths(std::span<const double> truths, std::span<const double> preds) {
  if (truths.size() != preds.size()) throw ParameterError("truths and predictions differ in length");
  if (truths.empty()) throw ParameterError("empty held-out set");
}

}  // namespace

double sse_loss(std::span<const double> truths, std::span<const double> preds) {
  check_lengths(truths, preds);
  double s = 0.0;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    const double d = truths[k] - preds[k];
    s += d * d;
  }
  return s / static_cast<double>(truths.size());
}

double sse_loss(const PairScoreSet& s) { return sse_loss(s.truths, s.preds); }

double deviance_loss(std::span<const double> truths, std::span<const double> preds) {
  check_lengths(truths, preds);
  double s = 0.0;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    const double x = truths[k];
    if (x != 0.0 && x != 1.0) throw ParameterError("binomial deviance needs binary truths");
    const double y = std::clamp(preds[k], kDevianceClip, 1.0 - kDevianceClip);
    s += x == 1.0 ? -std::log(y) : -std::log(1.0 - y);
  }
  return s / static_cast<double>(truths.size());
}

double deviance_loss(const PairScoreSet& s) { return deviance_loss(s.truths, s.preds); }

double auc(std::span<const double> truths, std::span<const double> preds) {
  check_lengths(truths, preds);
  const std::size_t n = truths.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return preds[a] < preds[b]; });
  double rank_sum = 0.0;
  double n_pos = 0.0;
  for (std::size_t k = 0; k < n;) {
    std::size_t end = k;
    while (end < n && preds[order[end]] == preds[order[k]]) ++end;
    // Ranks k+1 .. end share their average.
    const double avg_rank = (static_cast<double>(k + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t t = k; t < end; ++t) {
      const double x = truths[order[t]];
      if (x != 0.0 && x != 1.0) throw ParameterError("AUC needs binary truths");
      if (x == 1.0) {
        rank_sum += avg_rank;
        n_pos += 1.0;
      }
    }
    k = end;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw ParameterError("AUC needs both classes");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double auc(const PairScoreSet& s) { return auc(s.truths, s.preds); }

double ccd(const CommunityAssignment& a, const CommunityAssignment& b,
           std::span<const NodePair> pairs) {
  if (a.n() != b.n()) throw ParameterError("labelings differ in length");
  if (pairs.empty()) throw ParameterError("empty pair set");
  const std::int64_t ka = a.K();
  const std::int64_t kb = b.K();
  auto key = [](int x, int y, std::int64_t k) {
    return static_cast<std::int64_t>(std::min(x, y)) * k + std::max(x, y);
  };
  const std::int64_t classes_a = ka * ka;
  const std::int64_t classes_b = kb * kb;
  std::vector<std::int64_t> count_a(static_cast<std::size_t>(classes_a), 0);
  std::vector<std::int64_t> count_b(static_cast<std::size_t>(classes_b), 0);
  std::vector<std::int64_t> joint;
  joint.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const auto ca = key(a[i], a[j], ka);
    const auto cb = key(b[i], b[j], kb);
    ++count_a[static_cast<std::size_t>(ca)];
    ++count_b[static_cast<std::size_t>(cb)];
    joint.push_back(ca * classes_b + cb);
  }
  std::sort(joint.begin(), joint.end());
  // ‖G_a − G_b‖² = Σ s_c² + Σ t_d² − 2 Σ r_cd².
  std::int64_t total = 0;
  for (auto c : count_a) total += c * c;
  for (auto c : count_b) total += c * c;
  for (std::size_t k = 0; k < joint.size();) {
    std::size_t end = k;
    while (end < joint.size() && joint[end] == joint[k]) ++end;
    const auto r = static_cast<std::int64_t>(end - k);
    total -= 2 * r * r;
    k = end;
  }
  return static_cast<double>(total) / 2.0;
}

double nmi(const CommunityAssignment& a, const CommunityAssignment& b) {
  if (a.n() != b.n()) throw ParameterError("labelings differ in length");
  if (a.n() == 0) throw ParameterError("empty labeling");
  const auto n = static_cast<double>(a.n());
  DenseMatrix table = DenseMatrix::Zero(a.K(), b.K());
  for (Index i = 0; i < a.n(); ++i) table(a[i], b[i]) += 1.0;
  const Vector ra = table.rowwise().sum();
  const Vector rb = table.colwise().sum().transpose();
  auto entropy = [n](const Vector& c) {
    double h = 0.0;
    for (Index k = 0; k < c.size(); ++k) {
      if (c(k) > 0.0) h -= c(k) / n * std::log(c(k) / n);
    }
    return h;
  };
  const double ha = entropy(ra);
  const double hb = entropy(rb);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double mi = 0.0;
  for (Index r = 0; r < table.rows(); ++r) {
    for (Index c = 0; c < table.cols(); ++c) {
      const double v = table(r, c);
      if (v > 0.0) mi += v / n * std::log(v * n / (ra(r) * rb(c)));
    }
  }
  return mi / std::sqrt(ha * hb);
}

std::vector<int> hungarian_assignment(const DenseMatrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw ParameterError("assignment needs a square cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-based with a dummy column 0.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> match(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (Index row = 1; row <= n; ++row) {
    match[0] = row;
    Index col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(col0)] = 1;
      const Index row0 = match[static_cast<std::size_t>(col0)];
      double delta = inf;
      Index col1 = 0;
      for (Index col = 1; col <= n; ++col) {
        const auto c = static_cast<std::size_t>(col);
        if (used[c]) continue;
        const double cur = cost(row0 - 1, col - 1) - u[static_cast<std::size_t>(row0)] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = col;
        }
      }
      for (Index col = 0; col <= n; ++col) {
        const auto c = static_cast<std::size_t>(col);
        if (used[c]) {
          u[static_cast<std::size_t>(match[c])] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[static_cast<std::size_t>(col0)] != 0);
    do {
      const Index col1 = way[static_cast<std::size_t>(col0)];
      match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (Index col = 1; col <= n; ++col) {
    assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(col)] - 1)] =
        static_cast<int>(col - 1);
  }
  return assignment;
}

double clustering_accuracy(const CommunityAssignment& est, const CommunityAssignment& truth) {
  if (est.n() != truth.n()) throw ParameterError("labelings differ in length");
  if (est.n() == 0) throw ParameterError("empty labeling");
  const int k = std::max(est.K(), truth.K());
  DenseMatrix confusion = DenseMatrix::Zero(k, k);
  for (Index i = 0; i < est.n(); ++i) confusion(est[i], truth[i]) += 1.0;
  const auto match = hungarian_assignment(-confusion);
  double hits = 0.0;
  for (int r = 0; r < k; ++r) hits += confusion(r, match[static_cast<std::size_t>(r)]);
  return hits / static_cast<double>(est.n());
}

}  // namespace ecv
