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

#include "ecv/lowrank.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

namespace ecv {

namespace {

struct SmallSvd {
  Vector sigma;
  DenseMatrix u;
  DenseMatrix v;
};

// Square dense SVD through LAPACK dgesdd. Eigen 3.4.0's BDCSVD lost about
// 1e-3 relative accuracy on some clustered spectra, and JacobiSVD is slow
// once the projected matrix reaches a few hundred columns.
SmallSvd dense_svd(DenseMatrix a) {
  const auto n = static_cast<lapack_int>(a.rows());
  SmallSvd out{Vector(n), DenseMatrix(n, n), DenseMatrix(n, n)};
  DenseMatrix vt(n, n);
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', n, n, a.data(), n, out.sigma.data(),
                     out.u.data(), n, vt.data(), n);
  if (info != 0) throw Error("dense SVD did not converge");
  out.v = vt.transpose();
  return out;
}

DenseMatrix gaussian(Index rows, Index cols, Rng& rng) {
  DenseMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  }
  return g;
}

// Appends the columns of `w`, orthonormalized against `basis` (first `used`
// columns) and against each other, into basis columns [used, used + count).
// Columns that vanish after projection are replaced with random directions,
// so the basis always stays orthonormal.
void extend_basis(DenseMatrix& basis, Index used, DenseMatrix w, Index count,
                  Rng& rng) {
  const Index rows = basis.rows();
  Vector before = w.colwise().norm().transpose();
  // Block classical Gram-Schmidt, twice, against the existing basis.
  if (used > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const DenseMatrix c = basis.leftCols(used).transpose() * w;
      w.noalias() -= basis.leftCols(used) * c;
    }
  }
  auto project_out = [&](Eigen::Ref<Vector> v, Index from, Index upto) {
    for (int pass = 0; pass < 2; ++pass) {
      if (upto > from) {
        const Vector c = basis.middleCols(from, upto - from).transpose() * v;
        v.noalias() -= basis.middleCols(from, upto - from) * c;
      }
    }
  };
  for (Index j = 0; j < count; ++j) {
    Vector v = j < w.cols() ? Vector(w.col(j)) : Vector::Zero(rows);
    const double b = j < w.cols() ? before(j) : 0.0;
    project_out(v, used, used + j);
    double after = v.norm();
    if (after < 0.1 * b) {
      // Heavy cancellation: rounding left over from the block pass is now
      // large relative to v, so sweep the whole basis again.
      project_out(v, 0, used + j);
      after = v.norm();
    }
    if (b == 0.0 || after <= 1e-10 * b) {
      // Rank-deficient block: use a random direction orthogonal to everything.
      do {
        v = gaussian(rows, 1, rng).col(0);
        const double vb = v.norm();
        project_out(v, 0, used + j);
        after = v.norm();
        if (after > 1e-10 * vb) break;
      } while (true);
    }
    basis.col(used + j) = v / after;
  }
}

template <typename Mat>
void check_finite(const Mat& m) {
  if constexpr (std::is_same_v<Mat, SparseMatrix>) {
    for (Index k = 0; k < m.nonZeros(); ++k) {
      if (!std::isfinite(m.valuePtr()[k])) throw ParameterError("matrix has non-finite entries");
    }
  } else {
    if (!m.allFinite()) throw ParameterError("matrix has non-finite entries");
  }
}

template <typename Mat>
SvdResult block_lanczos_svd(const Mat& m, Index k, Rng& rng, const SvdOptions& opts) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  const Index full = std::min(rows, cols);
  if (k < 1) throw ParameterError("rank must be at least 1");
  if (k > full) throw ParameterError("rank exceeds matrix dimension");
  check_finite(m);

  const Index block = std::min(k + std::max<Index>(opts.oversampling, 0), full);
  // Krylov bases: M Q = P T with T upper triangular by blocks.
  DenseMatrix q(cols, full);
  DenseMatrix p(rows, full);
  DenseMatrix t = DenseMatrix::Zero(full, full);
  Index nq = 0;
  Index np = 0;

  extend_basis(q, 0, gaussian(cols, block, rng), block, rng);
  nq = block;

  SvdResult out;
  // The projected SVD costs O(np³), so convergence is checked on a
  // geometric schedule rather than after every block.
  Index next_check = k;
  for (;;) {
    const Index qb = nq - np;  // newest right block is q[np, nq)
    DenseMatrix w = m * q.middleCols(np, qb);
    extend_basis(p, np, w, qb, rng);
    const Index np_new = np + qb;
    t.block(0, np, np_new, qb).noalias() = p.leftCols(np_new).transpose() * w;
    np = np_new;

    if (np >= next_check || np == full) {
      const SmallSvd svd = dense_svd(t.topLeftCorner(np, np));
      out.sigma = svd.sigma.head(k);
      out.U.noalias() = p.leftCols(np) * svd.u.leftCols(k);
      out.V.noalias() = q.leftCols(np) * svd.v.leftCols(k);
      out.basis_dim = np;
      if (np == full) {
        out.converged = true;
        break;
      }
      const double scale = out.sigma(0);
      if (scale == 0.0) {
        out.converged = true;
        break;
      }
      DenseMatrix r = m.transpose() * out.U;
      r -= out.V * out.sigma.asDiagonal();
      if (r.colwise().norm().maxCoeff() <= opts.tol * scale) {
        out.converged = true;
        break;
      }
      next_check = std::max(np + block, np + np / 4);
    }

    const Index next = std::min(block, full - nq);
    DenseMatrix z = m.transpose() * p.middleCols(np - qb, qb);
    extend_basis(q, nq, z, next, rng);
    nq += next;
  }
  return out;
}

}  // namespace

SvdResult partial_svd(const SparseMatrix& m, Index k, Rng& rng, const SvdOptions& opts) {
  return block_lanczos_svd(m, k, rng, opts);
}

SvdResult partial_svd(const DenseMatrix& m, Index k, Rng& rng, const SvdOptions& opts) {
  return block_lanczos_svd(m, k, rng, opts);
}

CompletedMatrix::CompletedMatrix(DenseMatrix u, Vector sigma, DenseMatrix v, double p)
    : u_(std::move(u)), sigma_(std::move(sigma)), v_(std::move(v)), p_(p) {
  if (u_.cols() != sigma_.size() || v_.cols() != sigma_.size()) {
    throw ParameterError("factor shapes disagree with rank");
  }
}

DenseMatrix CompletedMatrix::dense() const {
  return u_ * sigma_.asDiagonal() * v_.transpose();
}

CompletedMatrix CompletedMatrix::truncated(Index k) const {
  if (k < 1 || k > rank()) throw ParameterError("truncation rank out of range");
  return CompletedMatrix(u_.leftCols(k), sigma_.head(k), v_.leftCols(k), p_);
}

SparseMatrix scaled_training_matrix(const AdjacencyMatrix& a, const HoldoutMask& mask) {
  if (mask.n() != a.n()) throw ParameterError("mask and matrix sizes differ");
  if (mask.directed() != a.directed()) throw ParameterError("mask and matrix directedness differ");
  SparseMatrix m = a.matrix();
  m.prune([&](Index i, Index j, double) { return mask.in_training(i, j); });
  m *= 1.0 / mask.p();
  return m;
}

CompletedMatrix complete(const AdjacencyMatrix& a, const HoldoutMask& mask, Index k,
                         Rng& rng, const SvdOptions& opts) {
  if (k > a.n()) throw ParameterError("rank exceeds node count");
  const SparseMatrix m = scaled_training_matrix(a, mask);
  SvdResult svd = partial_svd(m, k, rng, opts);
  return CompletedMatrix(std::move(svd.U), std::move(svd.sigma), std::move(svd.V), mask.p());
}

DenseMatrix truncate_entries(const CompletedMatrix& ahat, double lo, double hi) {
  if (lo > hi) throw ParameterError("empty truncation interval");
  return ahat.dense().cwiseMax(lo).cwiseMin(hi);
}

SparseMatrix zero_fill_rescale(const AdjacencyMatrix& a, const HoldoutMask& mask) {
  if (a.weighted()) {
    throw ParameterError("zero-fill rescaling does not work for weighted networks");
  }
  return scaled_training_matrix(a, mask);
}

}  // namespace ecv
