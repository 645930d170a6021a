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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ecv/core.hpp"

namespace ecv {

struct Edge {
  Index i;
  Index j;
  double w = 1.0;
};

/// Sparse network on n nodes. Immutable after construction.
///
/// Undirected matrices store both (i, j) and (j, i). There are no self-loops
/// and no explicit zeros. A binary matrix stores only weights equal to 1.
class AdjacencyMatrix {
 public:
  enum class Duplicates { kReject, kSum };

  AdjacencyMatrix() = default;

  /// Builds from an edge list. For undirected input each edge is mirrored;
  /// (i, j) and (j, i) name the same pair. Zero-weight edges are dropped.
  static AdjacencyMatrix from_edges(Index n, std::span<const Edge> edges,
                                    bool directed, bool weighted,
                                    Duplicates dup = Duplicates::kReject);

  /// Adopts an existing sparse matrix after checking every invariant.
  static AdjacencyMatrix from_sparse(SparseMatrix m, bool directed,
                                     bool weighted);

  Index n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  bool weighted() const noexcept { return weighted_; }
  const SparseMatrix& matrix() const noexcept { return m_; }
  Index nnz() const noexcept { return m_.nonZeros(); }

  /// Weight of (i, j); zero when absent.
  double weight(Index i, Index j) const;

  /// Stored entries in row-major order, both orientations for undirected.
  std::vector<Edge> entries() const;

  /// Sum of stored weights over unordered pairs (undirected) or ordered
  /// pairs (directed).
  double total_weight() const;

  DenseMatrix dense() const { return DenseMatrix(m_); }

  template <typename Fn>
  void for_each_entry(Fn&& fn) const {
    for (Index i = 0; i < m_.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(m_, i); it; ++it) {
        fn(i, static_cast<Index>(it.col()), it.value());
      }
    }
  }

 private:
  Index n_ = 0;
  bool directed_ = false;
  bool weighted_ = false;
  SparseMatrix m_;
};

std::vector<double> degrees(const AdjacencyMatrix& a);

/// D^{-1/2} A D^{-1/2}; rows and columns of zero-degree nodes are zero.
DenseMatrix normalized_laplacian(const AdjacencyMatrix& a);
DenseMatrix normalized_laplacian(const DenseMatrix& a);

/// A + tau * (mean degree / n) * 1 1ᵀ.
DenseMatrix regularize(const AdjacencyMatrix& a, double tau);
DenseMatrix regularize(const DenseMatrix& a, double tau);

struct CoreResult {
  AdjacencyMatrix core;
  /// kept[new] = old index.
  std::vector<Index> kept;
  /// old_to_new[old] = new index, or -1 when removed.
  std::vector<Index> old_to_new;
};

/// Repeatedly drops nodes whose incident weight is below `threshold` until
/// nothing changes, and returns the induced subgraph.
CoreResult extract_core(const AdjacencyMatrix& a, double threshold);

/// Edge-list text format: one "i j" or "i j w" per line, 0-based indices,
/// '#' starts a comment, optional header line "n <count>".
AdjacencyMatrix parse_edge_list(std::istream& in, bool directed,
                                bool weighted);
AdjacencyMatrix load_edge_list(const std::filesystem::path& path,
                               bool directed, bool weighted);

/// Writes the "n <count>" header and one line per edge (i < j when
/// undirected). Weights are written only for weighted matrices.
void write_edge_list(std::ostream& out, const AdjacencyMatrix& a);
void save_edge_list(const std::filesystem::path& path,
                    const AdjacencyMatrix& a);

}  // namespace ecv
