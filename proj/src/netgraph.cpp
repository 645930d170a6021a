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

#include "ecv/netgraph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace ecv {

namespace {

struct Triplet {
  Index i;
  Index j;
  double w;
};

SparseMatrix build_sparse(Index n, std::vector<Triplet>& t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  SparseMatrix m(n, n);
  m.reserve(static_cast<Index>(t.size()));
  Index row = -1;
  for (const auto& e : t) {
    while (row < e.i) {
      ++row;
      m.startVec(row);
    }
    m.insertBack(e.i, e.j) = e.w;
  }
  while (row < n - 1) {
    ++row;
    m.startVec(row);
  }
  m.finalize();
  return m;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos >= s.size()) break;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

AdjacencyMatrix AdjacencyMatrix::from_edges(Index n, std::span<const Edge> edges,
                                            bool directed, bool weighted,
                                            Duplicates dup) {
  if (n < 0) throw ParameterError("negative node count");
  std::vector<Triplet> t;
  t.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n) {
      throw ParameterError("edge index out of range");
    }
    if (e.i == e.j) throw ParameterError("self-loop at node " + std::to_string(e.i));
    if (!std::isfinite(e.w) || e.w < 0.0) {
      throw ParameterError("edge weight must be finite and non-negative");
    }
    if (!weighted && e.w != 1.0 && e.w != 0.0) {
      throw ParameterError("binary matrix given a weight other than 1");
    }
    if (directed) {
      t.push_back({e.i, e.j, e.w});
    } else {
      t.push_back({std::min(e.i, e.j), std::max(e.i, e.j), e.w});
    }
  }
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<Triplet> merged;
  merged.reserve(t.size() * (directed ? 1 : 2));
  for (std::size_t k = 0; k < t.size();) {
    Triplet cur = t[k++];
    while (k < t.size() && t[k].i == cur.i && t[k].j == cur.j) {
      if (dup == Duplicates::kReject || !weighted) {
        throw ParameterError("duplicate pair (" + std::to_string(cur.i) + ", " +
                             std::to_string(cur.j) + ")");
      }
      cur.w += t[k++].w;
    }
    if (cur.w == 0.0) continue;
    merged.push_back(cur);
    if (!directed) merged.push_back({cur.j, cur.i, cur.w});
  }

  AdjacencyMatrix a;
  a.n_ = n;
  a.directed_ = directed;
  a.weighted_ = weighted;
  a.m_ = build_sparse(n, merged);
  return a;
}

AdjacencyMatrix AdjacencyMatrix::from_sparse(SparseMatrix m, bool directed,
                                             bool weighted) {
  if (m.rows() != m.cols()) throw ParameterError("adjacency matrix must be square");
  m.prune(0.0, 0.0);
  m.makeCompressed();
  AdjacencyMatrix a;
  a.n_ = m.rows();
  a.directed_ = directed;
  a.weighted_ = weighted;
  a.m_ = std::move(m);
  a.for_each_entry([&](Index i, Index j, double w) {
    if (i == j) throw ParameterError("self-loop at node " + std::to_string(i));
    if (!std::isfinite(w) || w < 0.0) throw ParameterError("invalid edge weight");
    if (!weighted && w != 1.0) throw ParameterError("binary matrix given a weight other than 1");
    if (!directed && a.weight(j, i) != w) throw ParameterError("undirected matrix is not symmetric");
  });
  return a;
}

double AdjacencyMatrix::weight(Index i, Index j) const {
  const auto* outer = m_.outerIndexPtr();
  const auto* inner = m_.innerIndexPtr();
  const auto* begin = inner + outer[i];
  const auto* end = inner + outer[i + 1];
  const auto* it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return m_.valuePtr()[it - inner];
}

std::vector<Edge> AdjacencyMatrix::entries() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(nnz()));
  for_each_entry([&](Index i, Index j, double w) { out.push_back({i, j, w}); });
  return out;
}

double AdjacencyMatrix::total_weight() const {
  double s = 0.0;
  for_each_entry([&](Index i, Index j, double w) {
    if (directed_ || i < j) s += w;
  });
  return s;
}

std::vector<double> degrees(const AdjacencyMatrix& a) {
  std::vector<double> d(static_cast<std::size_t>(a.n()), 0.0);
  a.for_each_entry([&](Index i, Index, double w) { d[static_cast<std::size_t>(i)] += w; });
  return d;
}

DenseMatrix normalized_laplacian(const AdjacencyMatrix& a) {
  if (a.directed()) throw ParameterError("normalized Laplacian needs an undirected matrix");
  const auto d = degrees(a);
  DenseMatrix l = DenseMatrix::Zero(a.n(), a.n());
  a.for_each_entry([&](Index i, Index j, double w) {
    const double di = d[static_cast<std::size_t>(i)];
    const double dj = d[static_cast<std::size_t>(j)];
    if (di > 0.0 && dj > 0.0) l(i, j) = w / std::sqrt(di * dj);
  });
  return l;
}

DenseMatrix normalized_laplacian(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw ParameterError("normalized Laplacian needs a square matrix");
  const Vector d = a.rowwise().sum();
  Vector s(d.size());
  for (Index i = 0; i < d.size(); ++i) s(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  return s.asDiagonal() * a * s.asDiagonal();
}

DenseMatrix regularize(const AdjacencyMatrix& a, double tau) {
  if (a.directed()) throw ParameterError("regularization needs an undirected matrix");
  return regularize(a.dense(), tau);
}

DenseMatrix regularize(const DenseMatrix& a, double tau) {
  if (tau < 0.0) throw ParameterError("tau must be non-negative");
  const Index n = a.rows();
  if (n == 0) return a;
  const double mean_degree = a.sum() / static_cast<double>(n);
  return a.array() + tau * mean_degree / static_cast<double>(n);
}

CoreResult extract_core(const AdjacencyMatrix& a, double threshold) {
  if (a.directed()) throw ParameterError("core extraction needs an undirected matrix");
  const auto n = static_cast<std::size_t>(a.n());
  std::vector<double> strength = degrees(a);
  std::vector<char> alive(n, 1);
  // Peel in rounds so the result matches "remove all, then recompute".
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Index> doomed;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i] && strength[i] < threshold) doomed.push_back(static_cast<Index>(i));
    }
    for (Index v : doomed) alive[static_cast<std::size_t>(v)] = 0;
    for (Index v : doomed) {
      for (SparseMatrix::InnerIterator it(a.matrix(), v); it; ++it) {
        const auto u = static_cast<std::size_t>(it.col());
        if (alive[u]) strength[u] -= it.value();
      }
    }
    changed = !doomed.empty();
  }

  CoreResult r;
  r.old_to_new.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) {
      r.old_to_new[i] = static_cast<Index>(r.kept.size());
      r.kept.push_back(static_cast<Index>(i));
    }
  }
  std::vector<Edge> edges;
  a.for_each_entry([&](Index i, Index j, double w) {
    if (i < j && alive[static_cast<std::size_t>(i)] && alive[static_cast<std::size_t>(j)]) {
      edges.push_back({r.old_to_new[static_cast<std::size_t>(i)],
                       r.old_to_new[static_cast<std::size_t>(j)], w});
    }
  });
  r.core = AdjacencyMatrix::from_edges(static_cast<Index>(r.kept.size()), edges, false,
                                       a.weighted());
  return r;
}

AdjacencyMatrix parse_edge_list(std::istream& in, bool directed, bool weighted) {
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  Index declared_n = -1;
  Index max_index = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto tok = split_ws(view);
    if (tok[0] == "n") {
      if (tok.size() != 2 || !parse_number(tok[1], declared_n) || declared_n < 0) {
        throw ParseError(lineno, "malformed header, expected \"n <count>\"");
      }
      if (!edges.empty()) throw ParseError(lineno, "header must precede edges");
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3) {
      throw ParseError(lineno, "expected \"i j\" or \"i j w\"");
    }
    Edge e;
    if (!parse_number(tok[0], e.i) || !parse_number(tok[1], e.j) || e.i < 0 || e.j < 0) {
      throw ParseError(lineno, "node indices must be non-negative integers");
    }
    if (tok.size() == 3) {
      if (!parse_number(tok[2], e.w) || !std::isfinite(e.w)) {
        throw ParseError(lineno, "malformed weight");
      }
      if (e.w < 0.0) throw ParseError(lineno, "negative weight");
      if (!weighted && e.w != 1.0) throw ParseError(lineno, "weight in a binary edge list");
    }
    if (e.i == e.j) throw ParseError(lineno, "self-loop at node " + std::to_string(e.i));
    if (declared_n >= 0 && (e.i >= declared_n || e.j >= declared_n)) {
      throw ParseError(lineno, "node index exceeds declared n");
    }
    max_index = std::max({max_index, e.i, e.j});
    edges.push_back(e);
    lines.push_back(lineno);
  }
  if (!weighted) {
    std::vector<std::pair<NodePair, std::size_t>> keyed;
    keyed.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      const NodePair key = directed ? NodePair{e.i, e.j}
                                    : NodePair{std::min(e.i, e.j), std::max(e.i, e.j)};
      keyed.push_back({key, lines[k]});
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 1; k < keyed.size(); ++k) {
      if (keyed[k].first == keyed[k - 1].first) {
        throw ParseError(std::max(keyed[k].second, keyed[k - 1].second),
                         "duplicate pair in a binary edge list");
      }
    }
  }
  const Index n = declared_n >= 0 ? declared_n : max_index + 1;
  try {
    return AdjacencyMatrix::from_edges(n, edges, directed, weighted,
                                       weighted ? AdjacencyMatrix::Duplicates::kSum
                                                : AdjacencyMatrix::Duplicates::kReject);
  } catch (const ParameterError& e) {
    throw ParseError(lineno, e.what());
  }
}

AdjacencyMatrix load_edge_list(const std::filesystem::path& path, bool directed,
                               bool weighted) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_edge_list(in, directed, weighted);
}

void write_edge_list(std::ostream& out, const AdjacencyMatrix& a) {
  out << "n " << a.n() << '\n';
  char buf[64];
  a.for_each_entry([&](Index i, Index j, double w) {
    if (!a.directed() && i > j) return;
    out << i << ' ' << j;
    if (a.weighted()) {
      auto res = std::to_chars(buf, buf + sizeof buf, w);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  });
}

void save_edge_list(const std::filesystem::path& path, const AdjacencyMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(out, a);
}

}  // namespace ecv
