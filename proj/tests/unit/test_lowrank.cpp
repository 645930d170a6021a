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

#include <catch_amalgamated.hpp>

#include <numeric>

#include <Eigen/SVD>

#include "ecv/lowrank.hpp"

using namespace ecv;
using Catch::Approx;

namespace {

DenseMatrix gaussian(Index r, Index c, Rng& rng) {
  DenseMatrix m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  }
  return m;
}

// Reference rank-k truncation from a full dense SVD.
DenseMatrix reference_truncation(const DenseMatrix& m, Index k) {
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal() *
         svd.matrixV().leftCols(k).transpose();
}

AdjacencyMatrix random_binary(Index n, double prob, bool directed, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = directed ? 0 : i + 1; j < n; ++j) {
      if (i != j && rng.bernoulli(prob)) edges.push_back({i, j, 1.0});
    }
  }
  return AdjacencyMatrix::from_edges(n, edges, directed, false);
}

DenseMatrix masked_scaled(const AdjacencyMatrix& a, const HoldoutMask& mask) {
  DenseMatrix d = a.dense();
  for (Index i = 0; i < a.n(); ++i) {
    for (Index j = 0; j < a.n(); ++j) {
      if (!mask.in_training(i, j)) d(i, j) = 0.0;
    }
  }
  return d / mask.p();
}

}  // namespace

TEST_CASE("identity has unit singular values") {
  Rng rng(1);
  const auto r = partial_svd(DenseMatrix(DenseMatrix::Identity(5, 5)), 2, rng);
  REQUIRE(r.sigma.size() == 2);
  CHECK(r.sigma(0) == Approx(1.0).epsilon(1e-12));
  CHECK(r.sigma(1) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank one outer product") {
  Rng rng(2);
  Vector u(4), v(3);
  u << 1, 2, 3, 4;
  v << -1, 0.5, 2;
  const DenseMatrix m = u * v.transpose();
  const auto r = partial_svd(m, 1, rng);
  CHECK(r.sigma(0) == Approx(u.norm() * v.norm()).epsilon(1e-12));
  const DenseMatrix rec = r.U * r.sigma.asDiagonal() * r.V.transpose();
  CHECK((rec - m).norm() < 1e-10);
}

TEST_CASE("partial SVD agrees with a full dense SVD") {
  Rng data(3);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix m = gaussian(50 + 10 * trial, 50, data);
    Rng rng(100 + trial);
    const auto r = partial_svd(m, 5, rng);
    Eigen::JacobiSVD<DenseMatrix> ref(m);
    for (Index k = 0; k < 5; ++k) {
      CHECK(std::abs(r.sigma(k) - ref.singularValues()(k)) <= 1e-8 * ref.singularValues()(0));
    }
    const DenseMatrix rec = r.U * r.sigma.asDiagonal() * r.V.transpose();
    const DenseMatrix expect = reference_truncation(m, 5);
    CHECK((rec - expect).norm() <= 1e-8 * expect.norm());
    CHECK((r.U.transpose() * r.U - DenseMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((r.V.transpose() * r.V - DenseMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-6);
    for (Index k = 1; k < 5; ++k) CHECK(r.sigma(k) <= r.sigma(k - 1));
  }
}

TEST_CASE("rank-deficient input asks for more triplets than the rank") {
  Rng data(4);
  const DenseMatrix m = gaussian(40, 2, data) * gaussian(2, 30, data);
  Rng rng(5);
  const auto r = partial_svd(m, 5, rng);
  CHECK(r.sigma(2) < 1e-8 * r.sigma(0));
  const DenseMatrix rec = r.U * r.sigma.asDiagonal() * r.V.transpose();
  CHECK((rec - m).norm() <= 1e-8 * m.norm());
}

TEST_CASE("sparse and dense inputs give the same truncation") {
  const auto a = random_binary(80, 0.1, false, 6);
  Rng r1(7), r2(7);
  const auto s = partial_svd(a.matrix(), 4, r1);
  const auto d = partial_svd(a.dense(), 4, r2);
  CHECK((s.sigma - d.sigma).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("partial SVD validates its arguments") {
  Rng rng(1);
  DenseMatrix m = DenseMatrix::Ones(4, 4);
  CHECK_THROWS_AS(partial_svd(m, 0, rng), ParameterError);
  CHECK_THROWS_AS(partial_svd(m, 5, rng), ParameterError);
  m(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(partial_svd(m, 1, rng), ParameterError);
}

TEST_CASE("completion with p = 1 and full rank reproduces A") {
  const auto a = random_binary(30, 0.2, false, 8);
  Rng rng(9);
  const auto c = complete(a, HoldoutMask::full(30, false), 30, rng);
  CHECK((c.dense() - a.dense()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("completion of the 4x4 all-ones pattern at p = 0.5") {
  std::vector<Edge> e;
  for (Index i = 0; i < 4; ++i) {
    for (Index j = i + 1; j < 4; ++j) e.push_back({i, j, 1.0});
  }
  const auto a = AdjacencyMatrix::from_edges(4, e, false, true);
  Rng rng(1);
  const auto c = complete(a, HoldoutMask::full(4, false, 0.5), 1, rng);
  const DenseMatrix expect = 2.0 * reference_truncation(a.dense(), 1);
  CHECK((c.dense() - expect).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(c.p() == 0.5);
}

TEST_CASE("completion matches the truncated SVD of the scaled training matrix") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const bool directed = seed % 2 == 0;
    const auto a = random_binary(70, 0.15, directed, seed);
    Rng rng(seed + 50);
    const auto mask = sample_mask(70, 0.8, directed, rng);
    const auto c = complete(a, mask, 4, rng);
    const DenseMatrix expect = reference_truncation(masked_scaled(a, mask), 4);
    CHECK((c.dense() - expect).norm() <= 1e-8 * expect.norm());
    if (!directed) {
      const DenseMatrix d = c.dense();
      CHECK((d - d.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("completion is equivariant under relabelling") {
  const auto a = random_binary(40, 0.2, false, 12);
  Rng rng(13);
  const auto mask = sample_mask(40, 0.85, false, rng);
  std::vector<Index> perm(40);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.begin() + 25);
  std::vector<Edge> pe;
  for (const auto& e : a.entries()) {
    if (e.i < e.j) pe.push_back({perm[static_cast<std::size_t>(e.i)], perm[static_cast<std::size_t>(e.j)], e.w});
  }
  const auto pa = AdjacencyMatrix::from_edges(40, pe, false, false);
  Rng r1(1), r2(2);
  const DenseMatrix c = complete(a, mask, 3, r1).dense();
  const DenseMatrix pc = complete(pa, mask.permuted(perm), 3, r2).dense();
  double worst = 0.0;
  for (Index i = 0; i < 40; ++i) {
    for (Index j = 0; j < 40; ++j) {
      worst = std::max(worst, std::abs(pc(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) - c(i, j)));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("completion rejects a rank above n") {
  const auto a = random_binary(5, 0.5, false, 1);
  Rng rng(1);
  CHECK_THROWS_AS(complete(a, HoldoutMask::full(5, false), 6, rng), ParameterError);
}

TEST_CASE("truncated keeps the leading triplets") {
  const auto a = random_binary(30, 0.3, false, 14);
  Rng rng(1);
  const auto c = complete(a, HoldoutMask::full(30, false), 6, rng);
  const auto t = c.truncated(2);
  CHECK(t.rank() == 2);
  CHECK((t.dense() - reference_truncation(a.dense(), 2)).norm() < 1e-8);
  CHECK_THROWS_AS(c.truncated(7), ParameterError);
}

TEST_CASE("entry truncation clamps and never moves away from the box") {
  DenseMatrix u = DenseMatrix::Identity(3, 3), v = DenseMatrix::Identity(3, 3);
  Vector s(3);
  s << 1.5, -0.2, 0.4;
  const CompletedMatrix c(u, s, v, 1.0);
  const auto t = truncate_entries(c, 0.0, 1.0);
  CHECK(t(0, 0) == 1.0);
  CHECK(t(1, 1) == 0.0);
  CHECK(t(2, 2) == 0.4);
  CHECK(t(0, 1) == 0.0);

  Rng rng(3);
  const DenseMatrix m = gaussian(10, 10, rng);
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CompletedMatrix cm(svd.matrixU(), svd.singularValues(), svd.matrixV(), 1.0);
  const DenseMatrix clamped = truncate_entries(cm, -0.5, 0.5);
  const DenseMatrix inside = m.cwiseMax(-0.5).cwiseMin(0.5);
  CHECK((clamped - inside).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(truncate_entries(cm, 1.0, 0.0), ParameterError);
}

TEST_CASE("zero-fill rescaling") {
  const auto a = random_binary(10, 0.4, false, 15);
  const auto full = zero_fill_rescale(a, HoldoutMask::full(10, false));
  CHECK((DenseMatrix(full) - a.dense()).cwiseAbs().maxCoeff() == 0.0);

  std::vector<Edge> e{{0, 1, 1.0}, {1, 2, 1.0}};
  const auto b = AdjacencyMatrix::from_edges(3, e, false, false);
  std::vector<NodePair> train{{0, 1}};
  const DenseMatrix z(zero_fill_rescale(b, HoldoutMask::from_training_pairs(3, false, 0.5, train)));
  CHECK(z(0, 1) == 2.0);
  CHECK(z(1, 0) == 2.0);
  CHECK(z(1, 2) == 0.0);

  const auto w = AdjacencyMatrix::from_edges(3, e, false, true);
  CHECK_THROWS_AS(zero_fill_rescale(w, HoldoutMask::full(3, false)), ParameterError);
}
