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
#include "ecv/netgraph.hpp"
#include "ecv/rng.hpp"

namespace ecv {

/// Training node-pair set Ω together with its sampling probability p.
///
/// Membership is a bitset over the n×n grid; the diagonal is never part of
/// Ω or Ω^c. Undirected masks are symmetric and list their held-out pairs
/// once each with i < j; directed masks list ordered pairs.
class HoldoutMask {
 public:
  HoldoutMask() = default;

  /// Ω = every off-diagonal pair, with a declared probability `p`.
  static HoldoutMask full(Index n, bool directed, double p = 1.0);

  /// Ω given explicitly; undirected input is symmetrized.
  static HoldoutMask from_training_pairs(Index n, bool directed, double p,
                                         std::span<const NodePair> train);

  Index n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  double p() const noexcept { return p_; }

  bool in_training(Index i, Index j) const noexcept {
    if (i == j) return false;
    const auto k = static_cast<std::size_t>(i * n_ + j);
    return (bits_[k >> 6] >> (k & 63)) & 1U;
  }
  bool held_out(Index i, Index j) const noexcept {
    return i != j && !in_training(i, j);
  }

  /// Ω^c, as unordered pairs (undirected) or ordered pairs (directed).
  std::span<const NodePair> held_out_pairs() const noexcept { return held_out_; }

  /// |Ω| counted over ordered pairs.
  Index training_count() const noexcept;

  /// Same Ω with every node index relabelled: new index of old node v is
  /// perm[v].
  HoldoutMask permuted(std::span<const Index> perm) const;

 private:
  friend HoldoutMask sample_mask(Index, double, bool, Rng&);
  void set(Index i, Index j) {
    const auto k = static_cast<std::size_t>(i * n_ + j);
    bits_[k >> 6] |= std::uint64_t{1} << (k & 63);
  }
  void init(Index n, bool directed, double p);
  void collect_held_out();

  Index n_ = 0;
  bool directed_ = false;
  double p_ = 1.0;
  std::vector<std::uint64_t> bits_;
  std::vector<NodePair> held_out_;
};

/// Each pair enters Ω independently with probability p (unordered pairs
/// for undirected masks). An empty Ω is redrawn.
HoldoutMask sample_mask(Index n, double p, bool directed, Rng& rng);

/// P_Ω A: entries outside Ω removed, the rest kept verbatim.
AdjacencyMatrix zero_fill(const AdjacencyMatrix& a, const HoldoutMask& mask);

}  // namespace ecv
