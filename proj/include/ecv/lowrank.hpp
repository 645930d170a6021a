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

#include "ecv/core.hpp"
#include "ecv/holdout.hpp"
#include "ecv/netgraph.hpp"
#include "ecv/rng.hpp"

namespace ecv {

struct SvdOptions {
  /// Extra block columns beyond the requested rank.
  Index oversampling = 10;
  /// Stop once every requested triplet satisfies
  /// ‖Mᵀu − σv‖ ≤ tol · σ₁.
  double tol = 1e-11;
};

struct SvdResult {
  DenseMatrix U;
  Vector sigma;
  DenseMatrix V;
  /// Dimension of the Krylov basis when the iteration stopped.
  Index basis_dim = 0;
  bool converged = false;
};

/// Top-k singular triplets by block Golub-Kahan-Lanczos bidiagonalization
/// with full reorthogonalization, started from a seeded Gaussian block.
/// Singular vectors are defined up to sign and rotation within repeated
/// singular values; only U diag(σ) Vᵀ is meaningful.
SvdResult partial_svd(const SparseMatrix& m, Index k, Rng& rng,
                      const SvdOptions& opts = {});
SvdResult partial_svd(const DenseMatrix& m, Index k, Rng& rng,
                      const SvdOptions& opts = {});

/// Rank-K reconstruction Â = U diag(σ) Vᵀ held in factored form.
class CompletedMatrix {
 public:
  CompletedMatrix() = default;
  CompletedMatrix(DenseMatrix u, Vector sigma, DenseMatrix v, double p);

  Index n() const noexcept { return u_.rows(); }
  Index rank() const noexcept { return sigma_.size(); }
  double p() const noexcept { return p_; }
  const DenseMatrix& U() const noexcept { return u_; }
  const Vector& sigma() const noexcept { return sigma_; }
  const DenseMatrix& V() const noexcept { return v_; }

  double operator()(Index i, Index j) const {
    double s = 0.0;
    for (Index k = 0; k < sigma_.size(); ++k) s += u_(i, k) * sigma_(k) * v_(j, k);
    return s;
  }

  DenseMatrix dense() const;

  /// The leading k triplets; S_H(B, k) for any k not above rank().
  CompletedMatrix truncated(Index k) const;

 private:
  DenseMatrix u_;
  Vector sigma_;
  DenseMatrix v_;
  double p_ = 1.0;
};

/// (1/p) P_Ω A as a sparse matrix, for any weights.
SparseMatrix scaled_training_matrix(const AdjacencyMatrix& a,
                                    const HoldoutMask& mask);

/// Â = S_H((1/p) P_Ω A, K).
CompletedMatrix complete(const AdjacencyMatrix& a, const HoldoutMask& mask,
                         Index k, Rng& rng, const SvdOptions& opts = {});

/// Dense Â with entries clamped to [lo, hi].
DenseMatrix truncate_entries(const CompletedMatrix& ahat, double lo, double hi);

/// P_Ω A / p, the zero-filled alternative to completion. Binary input only.
SparseMatrix zero_fill_rescale(const AdjacencyMatrix& a,
                               const HoldoutMask& mask);

}  // namespace ecv
