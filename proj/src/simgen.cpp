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

#include "ecv/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace ecv {

namespace {

// Independent Bernoulli upper triangle, mirrored.
AdjacencyMatrix sample_undirected(const DenseMatrix& m, Rng& rng) {
  const Index n = m.rows();
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (rng.uniform() < m(i, j)) edges.push_back({i, j, 1.0});
    }
  }
  return AdjacencyMatrix::from_edges(n, edges, false, false);
}

constexpr double kPiecewiseDensity = 0.1;
constexpr double kPiecewiseBeta = 0.2;

}  // namespace

std::vector<Index> community_sizes(Index n, int k, double t) {
  if (k < 1 || k > n) throw ParameterError("need 1 <= K <= n");
  if (t < 0.0) throw ParameterError("size exponent t must be non-negative");
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) w[static_cast<std::size_t>(c)] = std::pow(static_cast<double>(c + 1), t);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<Index> sizes(static_cast<std::size_t>(k));
  std::vector<std::pair<double, int>> remainders;
  Index assigned = 0;
  for (int c = 0; c < k; ++c) {
    const double exact = static_cast<double>(n) * w[static_cast<std::size_t>(c)] / total;
    sizes[static_cast<std::size_t>(c)] = static_cast<Index>(std::floor(exact));
    assigned += sizes[static_cast<std::size_t>(c)];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  // Largest remainder first; ties go to the lower community index.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (Index r = 0; r < n - assigned; ++r) ++sizes[static_cast<std::size_t>(remainders[static_cast<std::size_t>(r)].second)];
  return sizes;
}

double sample_power_law(Rng& rng) {
  return std::pow(1.0 - rng.uniform(), -0.25);
}

PlantedInstance gen_block_model(const BlockDesign& d, Rng& rng) {
  if (d.K < 1 || d.K > d.n) throw ParameterError("need 1 <= K <= n");
  if (!(d.lambda > 0.0)) throw ParameterError("lambda must be positive");
  if (d.beta < 0.0 || d.beta > 1.0) throw ParameterError("beta must lie in [0, 1]");
  const Index n = d.n;
  const auto sizes = community_sizes(n, d.K, d.t);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < d.K; ++c) labels.insert(labels.end(), static_cast<std::size_t>(sizes[static_cast<std::size_t>(c)]), c);

  std::vector<double> theta(static_cast<std::size_t>(n), 1.0);
  if (d.degree_corrected) {
    std::vector<double> pool(300);
    for (auto& x : pool) x = sample_power_law(rng);
    for (auto& th : theta) th = pool[rng.below(pool.size())];
  }

  DenseMatrix m(n, n);
  double offdiag_sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double b = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : d.beta;
      m(i, j) = theta[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(j)] * b;
      if (i != j) offdiag_sum += m(i, j);
    }
  }
  if (offdiag_sum <= 0.0) throw ParameterError("design has no possible edges");
  m *= d.lambda * static_cast<double>(n) / offdiag_sum;

  Index clipped = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (m(i, j) > 1.0) {
        m(i, j) = 1.0;
        if (i != j) ++clipped;
      }
    }
  }

  PlantedInstance out;
  out.A = sample_undirected(m, rng);
  out.truth = CommunityAssignment(std::move(labels), d.K);
  out.M = std::move(m);
  out.clip_fraction = n > 1 ? static_cast<double>(clipped) / static_cast<double>(n * (n - 1)) : 0.0;
  out.infeasible = out.clip_fraction > 0.5;
  return out;
}

PlantedInstance gen_rdpg_directed(Index n, int k, Rng& rng) {
  if (k < 1 || k > n) throw ParameterError("need 1 <= K <= n");
  DenseMatrix s1(n, k), s2(n, k);
  for (Index c = 0; c < k; ++c) {
    for (Index i = 0; i < n; ++i) s1(i, c) = rng.uniform();
  }
  for (Index c = 0; c < k; ++c) {
    for (Index i = 0; i < n; ++i) s2(i, c) = rng.uniform();
  }
  DenseMatrix m = s1 * s2.transpose();
  const double top = m.maxCoeff();
  if (top > 0.0) m /= top;

  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && rng.uniform() < m(i, j)) edges.push_back({i, j, 1.0});
    }
  }
  PlantedInstance out;
  out.A = AdjacencyMatrix::from_edges(n, edges, true, false);
  out.M = std::move(m);
  return out;
}

GraphonKind parse_graphon_kind(std::string_view name) {
  if (name == "piecewise" || name == "piecewise_k3" || name == "PIECEWISE_K3") {
    return GraphonKind::kPiecewiseK3;
  }
  if (name == "smooth" || name == "smooth_rankfull" || name == "SMOOTH_RANKFULL") {
    return GraphonKind::kSmoothRankFull;
  }
  throw ParameterError("unknown graphon '" + std::string(name) + "'");
}

std::string_view graphon_name(GraphonKind kind) {
  return kind == GraphonKind::kPiecewiseK3 ? "piecewise_k3" : "smooth_rankfull";
}

double graphon_value(GraphonKind kind, double u, double v) {
  switch (kind) {
    case GraphonKind::kPiecewiseK3: {
      // Three equal blocks, B₀ = 0.8 I + 0.2 11ᵀ, scaled to mean 0.1.
      const int a = std::min(static_cast<int>(u * 3.0), 2);
      const int b = std::min(static_cast<int>(v * 3.0), 2);
      const double mean_b0 = (3.0 + 6.0 * kPiecewiseBeta) / 9.0;
      const double scale = kPiecewiseDensity / mean_b0;
      return scale * (a == b ? 1.0 : kPiecewiseBeta);
    }
    case GraphonKind::kSmoothRankFull: {
      const double g = 1.0 / (1.0 + std::exp(-5.0 * (u * u + v * v)));
      const double g_max = 1.0 / (1.0 + std::exp(-10.0));
      return 0.05 + 0.45 * (g - 0.5) / (g_max - 0.5);
    }
  }
  return 0.0;
}

PlantedInstance gen_graphon(Index n, GraphonKind kind, Rng& rng) {
  if (n < 3) throw ParameterError("graphon sampling needs n >= 3");
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (auto& x : xi) x = rng.uniform();
  DenseMatrix m(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      m(i, j) = graphon_value(kind, xi[static_cast<std::size_t>(i)], xi[static_cast<std::size_t>(j)]);
    }
  }
  PlantedInstance out;
  out.A = sample_undirected(m, rng);
  out.M = std::move(m);
  return out;
}

void write_truth(std::ostream& out, const CommunityAssignment& truth) {
  for (Index i = 0; i < truth.n(); ++i) out << i << ' ' << truth[i] << '\n';
}

}  // namespace ecv
