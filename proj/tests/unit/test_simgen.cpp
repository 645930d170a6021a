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
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "ecv/simgen.hpp"

using namespace ecv;
using Catch::Approx;

namespace {

double offdiag_sum(const DenseMatrix& m) { return m.sum() - m.diagonal().sum(); }

double mean_degree(const AdjacencyMatrix& a) {
  return 2.0 * a.total_weight() / static_cast<double>(a.n());
}

}  // namespace

TEST_CASE("community sizes use largest remainder rounding") {
  // Weights 1, 2, 3 over n = 10: exact 1.67, 3.33, 5.
  CHECK(community_sizes(10, 3, 1.0) == std::vector<Index>{2, 3, 5});
  const auto s = community_sizes(601, 3, 0.0);
  CHECK(s == std::vector<Index>{201, 200, 200});
  const auto u = community_sizes(1000, 4, 0.5);
  CHECK(std::accumulate(u.begin(), u.end(), Index{0}) == 1000);
  CHECK(std::is_sorted(u.begin(), u.end()));
  CHECK_THROWS_AS(community_sizes(5, 6, 0.0), ParameterError);
}

TEST_CASE("power-law draws follow the density 4 x^-5") {
  Rng rng(1);
  const int draws = 200000;
  double sum = 0, above2 = 0, minimum = 10;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_power_law(rng);
    sum += x;
    above2 += x > 2.0;
    minimum = std::min(minimum, x);
  }
  CHECK(minimum >= 1.0);
  // Mean 4/3 and tail P(X > 2) = 1/16.
  CHECK(sum / draws == Approx(4.0 / 3.0).epsilon(0.01));
  CHECK(above2 / draws == Approx(1.0 / 16.0).epsilon(0.03));
}

TEST_CASE("beta = 0 gives a block-diagonal M") {
  Rng rng(2);
  const auto inst = gen_block_model({40, 2, 5.0, 0.0, 0.0, false}, rng);
  REQUIRE(inst.truth);
  for (Index i = 0; i < 40; ++i) {
    for (Index j = 0; j < 40; ++j) {
      if ((*inst.truth)[i] != (*inst.truth)[j]) CHECK(inst.M(i, j) == 0.0);
    }
  }
}

TEST_CASE("SBM probabilities are constant on block pairs") {
  Rng rng(3);
  const auto inst = gen_block_model({90, 3, 10.0, 1.0, 0.3, false}, rng);
  const auto& c = *inst.truth;
  DenseMatrix first = DenseMatrix::Constant(3, 3, -1);
  for (Index i = 0; i < 90; ++i) {
    for (Index j = 0; j < 90; ++j) {
      if (i == j) continue;
      double& f = first(c[i], c[j]);
      if (f < 0) f = inst.M(i, j);
      CHECK(inst.M(i, j) == f);
    }
  }
  CHECK((inst.M - inst.M.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("expected mean degree equals lambda") {
  for (bool dc : {false, true}) {
    Rng rng(4);
    const auto inst = gen_block_model({300, 3, 20.0, 0.0, 0.2, dc}, rng);
    CHECK(inst.clip_fraction == 0.0);
    CHECK(offdiag_sum(inst.M) / 300.0 == Approx(20.0).epsilon(1e-12));
    CHECK(inst.M.minCoeff() >= 0.0);
    CHECK(inst.M.maxCoeff() <= 1.0);
  }
}

TEST_CASE("empirical mean degree is within 5% of lambda over 50 draws") {
  Rng rng(5);
  double total = 0;
  for (int r = 0; r < 50; ++r) total += mean_degree(gen_block_model({600, 3, 40.0, 0.0, 0.2, false}, rng).A);
  CHECK(std::abs(total / 50 - 40.0) <= 0.05 * 40.0);
}

TEST_CASE("adjacency is symmetric, binary and loop free") {
  Rng rng(6);
  const auto inst = gen_block_model({100, 2, 8.0, 0.0, 0.2, true}, rng);
  CHECK_FALSE(inst.A.directed());
  CHECK_FALSE(inst.A.weighted());
  const DenseMatrix d = inst.A.dense();
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.diagonal().cwiseAbs().sum() == 0.0);
}

TEST_CASE("an infeasible degree target is flagged") {
  Rng rng(7);
  const auto inst = gen_block_model({50, 3, 200.0, 0.0, 0.2, false}, rng);
  CHECK(inst.clip_fraction > 0.5);
  CHECK(inst.infeasible);
  CHECK(inst.M.maxCoeff() <= 1.0);
}

TEST_CASE("generators are reproducible from the seed") {
  Rng a(8), b(8);
  const auto x = gen_block_model({120, 3, 10.0, 0.0, 0.2, true}, a);
  const auto y = gen_block_model({120, 3, 10.0, 0.0, 0.2, true}, b);
  CHECK((x.A.dense() - y.A.dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((x.M - y.M).cwiseAbs().maxCoeff() == 0.0);
  CHECK(*x.truth == *y.truth);
}

TEST_CASE("directed RDPG") {
  Rng rng(9);
  const auto one = gen_rdpg_directed(50, 1, rng);
  Eigen::JacobiSVD<DenseMatrix> svd(one.M);
  CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
  CHECK(one.M.maxCoeff() == 1.0);
  CHECK_FALSE(one.truth);
  CHECK(one.A.directed());

  double density = 0, expected = 0;
  for (int r = 0; r < 50; ++r) {
    const auto inst = gen_rdpg_directed(100, 3, rng);
    density += static_cast<double>(inst.A.nnz()) / (100.0 * 99.0);
    expected += offdiag_sum(inst.M) / (100.0 * 99.0);
    CHECK(inst.M.maxCoeff() == 1.0);
  }
  CHECK(density / 50 == Approx(expected / 50).epsilon(0.02));
}

TEST_CASE("graphon names parse") {
  CHECK(parse_graphon_kind("piecewise") == GraphonKind::kPiecewiseK3);
  CHECK(parse_graphon_kind("PIECEWISE_K3") == GraphonKind::kPiecewiseK3);
  CHECK(parse_graphon_kind("smooth") == GraphonKind::kSmoothRankFull);
  CHECK_THROWS_AS(parse_graphon_kind("wavy"), ParameterError);
}

TEST_CASE("graphon functions are symmetric and bounded") {
  for (auto kind : {GraphonKind::kPiecewiseK3, GraphonKind::kSmoothRankFull}) {
    for (double u = 0.01; u < 1; u += 0.07) {
      for (double v = 0.02; v < 1; v += 0.09) {
        CHECK(graphon_value(kind, u, v) == graphon_value(kind, v, u));
        CHECK(graphon_value(kind, u, v) >= 0.0);
        CHECK(graphon_value(kind, u, v) <= 1.0);
      }
    }
  }
  CHECK(graphon_value(GraphonKind::kSmoothRankFull, 1.0, 1.0) == Approx(0.5));
  CHECK(graphon_value(GraphonKind::kSmoothRankFull, 0.0, 0.0) == Approx(0.05));
}

TEST_CASE("piecewise graphon takes few distinct values") {
  Rng rng(10);
  const auto inst = gen_graphon(200, GraphonKind::kPiecewiseK3, rng);
  std::set<double> values;
  for (Index i = 0; i < 200; ++i) {
    for (Index j = 0; j < 200; ++j) {
      if (i != j) values.insert(inst.M(i, j));
    }
  }
  CHECK(values.size() <= 6);
  CHECK((inst.M - inst.M.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("graphon mean matches numerical quadrature") {
  for (auto kind : {GraphonKind::kPiecewiseK3, GraphonKind::kSmoothRankFull}) {
    const int grid = 1200;
    double integral = 0;
    for (int a = 0; a < grid; ++a) {
      for (int b = 0; b < grid; ++b) {
        integral += graphon_value(kind, (a + 0.5) / grid, (b + 0.5) / grid);
      }
    }
    integral /= static_cast<double>(grid) * grid;

    Rng rng(11);
    const int reps = 40;
    std::vector<double> means;
    for (int r = 0; r < reps; ++r) {
      const auto inst = gen_graphon(150, kind, rng);
      means.push_back(offdiag_sum(inst.M) / (150.0 * 149.0));
    }
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / reps;
    double var = 0;
    for (double m : means) var += (m - mean) * (m - mean);
    const double se = std::sqrt(var / (reps - 1) / reps);
    CHECK(std::abs(mean - integral) <= 4 * se + 1e-4);
  }
}

TEST_CASE("truth sidecar format") {
  std::ostringstream out;
  write_truth(out, CommunityAssignment({0, 2, 1}, 3));
  CHECK(out.str() == "0 0\n1 2\n2 1\n");
}
