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

#include "ecv/blockmodel.hpp"

namespace ecv {

namespace {

void check_inputs(const AdjacencyMatrix& a, const HoldoutMask& mask,
                  const CommunityAssignment& labels) {
  if (a.directed()) throw ParameterError("block models need an undirected network");
  if (mask.n() != a.n() || mask.directed()) throw ParameterError("mask does not match network");
  if (labels.n() != a.n()) throw ParameterError("label vector length does not match network");
}

}  // namespace

FittedBlockModel estimate_sbm(const AdjacencyMatrix& a, const HoldoutMask& mask,
                              const CommunityAssignment& labels) {
  check_inputs(a, mask, labels);
  const int k = labels.K();
  DenseMatrix weight = DenseMatrix::Zero(k, k);
  DenseMatrix pairs = DenseMatrix::Zero(k, k);

  // Pair counts: every unordered pair, minus the held-out ones.
  const auto sizes = labels.sizes();
  for (int r = 0; r < k; ++r) {
    const double nr = static_cast<double>(sizes[static_cast<std::size_t>(r)]);
    pairs(r, r) = nr * (nr - 1.0) / 2.0;
    for (int s = r + 1; s < k; ++s) {
      pairs(r, s) = pairs(s, r) = nr * static_cast<double>(sizes[static_cast<std::size_t>(s)]);
    }
  }
  for (const auto& [i, j] : mask.held_out_pairs()) {
    const int r = labels[i];
    const int s = labels[j];
    pairs(r, s) -= 1.0;
    if (r != s) pairs(s, r) -= 1.0;
  }
  a.for_each_entry([&](Index i, Index j, double w) {
    if (i >= j || !mask.in_training(i, j)) return;
    const int r = labels[i];
    const int s = labels[j];
    weight(r, s) += w;
    if (r != s) weight(s, r) += w;
  });

  FittedBlockModel m;
  m.kind = BlockModelKind::kSBM;
  m.labels = labels;
  m.p = mask.p();
  m.block = DenseMatrix::Zero(k, k);
  for (int r = 0; r < k; ++r) {
    for (int s = 0; s < k; ++s) {
      if (pairs(r, s) > 0.0) m.block(r, s) = weight(r, s) / pairs(r, s);
    }
  }
  return m;
}

FittedBlockModel estimate_dcsbm(const AdjacencyMatrix& a, const HoldoutMask& mask,
                                const CommunityAssignment& labels) {
  check_inputs(a, mask, labels);
  const int k = labels.K();
  const auto n = static_cast<std::size_t>(a.n());
  DenseMatrix ostar = DenseMatrix::Zero(k, k);
  std::vector<double> train_degree(n, 0.0);
  a.for_each_entry([&](Index i, Index j, double w) {
    if (!mask.in_training(i, j)) return;
    ostar(labels[i], labels[j]) += w;
    train_degree[static_cast<std::size_t>(i)] += w;
  });
  const Vector block_total = ostar.rowwise().sum();

  FittedBlockModel m;
  m.kind = BlockModelKind::kDCSBM;
  m.labels = labels;
  m.p = mask.p();
  m.block = ostar;
  m.theta.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = block_total(labels[static_cast<Index>(i)]);
    if (denom > 0.0) m.theta[i] = train_degree[i] / denom;
  }
  return m;
}

DenseMatrix probability_matrix(const FittedBlockModel& model) {
  const Index n = model.labels.n();
  DenseMatrix p(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) p(i, j) = i == j ? 0.0 : model.probability(i, j);
  }
  return p;
}

}  // namespace ecv
