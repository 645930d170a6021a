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

#include "ecv/holdout.hpp"

#include <bit>

namespace ecv {

void HoldoutMask::init(Index n, bool directed, double p) {
  if (n < 2) throw ParameterError("mask needs at least two nodes");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
  n_ = n;
  directed_ = directed;
  p_ = p;
  bits_.assign(static_cast<std::size_t>((n * n + 63) / 64), 0);
  held_out_.clear();
}

void HoldoutMask::collect_held_out() {
  held_out_.clear();
  for (Index i = 0; i < n_; ++i) {
    for (Index j = directed_ ? 0 : i + 1; j < n_; ++j) {
      if (i != j && !in_training(i, j)) held_out_.emplace_back(i, j);
    }
  }
}

HoldoutMask HoldoutMask::full(Index n, bool directed, double p) {
  HoldoutMask m;
  m.init(n, directed, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) m.set(i, j);
    }
  }
  return m;
}

HoldoutMask HoldoutMask::from_training_pairs(Index n, bool directed, double p,
                                             std::span<const NodePair> train) {
  HoldoutMask m;
  m.init(n, directed, p);
  for (const auto& [i, j] : train) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw ParameterError("pair index out of range");
    if (i == j) throw ParameterError("diagonal pairs cannot be in the training set");
    m.set(i, j);
    if (!directed) m.set(j, i);
  }
  m.collect_held_out();
  return m;
}

Index HoldoutMask::training_count() const noexcept {
  Index c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

HoldoutMask HoldoutMask::permuted(std::span<const Index> perm) const {
  if (static_cast<Index>(perm.size()) != n_) throw ParameterError("permutation size mismatch");
  HoldoutMask m;
  m.init(n_, directed_, p_);
  for (Index i = 0; i < n_; ++i) {
    for (Index j = 0; j < n_; ++j) {
      if (in_training(i, j)) m.set(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  m.collect_held_out();
  return m;
}

HoldoutMask sample_mask(Index n, double p, bool directed, Rng& rng) {
  HoldoutMask m;
  m.init(n, directed, p);
  if (p == 1.0) return HoldoutMask::full(n, directed);
  for (;;) {
    bool any = false;
    for (Index i = 0; i < n; ++i) {
      for (Index j = directed ? 0 : i + 1; j < n; ++j) {
        if (i == j) continue;
        if (rng.uniform() < p) {
          m.set(i, j);
          if (!directed) m.set(j, i);
          any = true;
        }
      }
    }
    if (any) break;
  }
  m.collect_held_out();
  return m;
}

AdjacencyMatrix zero_fill(const AdjacencyMatrix& a, const HoldoutMask& mask) {
  if (mask.n() != a.n()) throw ParameterError("mask and matrix sizes differ");
  if (mask.directed() != a.directed()) throw ParameterError("mask and matrix directedness differ");
  SparseMatrix m = a.matrix();
  m.prune([&](Index i, Index j, double) { return mask.in_training(i, j); });
  return AdjacencyMatrix::from_sparse(std::move(m), a.directed(), a.weighted());
}

}  // namespace ecv
