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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecv/blockmodel.hpp"
#include "ecv/graphon.hpp"
#include "ecv/metrics.hpp"
#include "ecv/selection.hpp"
#include "ecv/simgen.hpp"

namespace py = pybind11;
using namespace ecv;

namespace {

AdjacencyMatrix network_from_edges(Index n, py::array_t<std::int64_t, py::array::c_style | py::array::forcecast> edges,
                                   std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>> weights,
                                   bool directed) {
  if (edges.ndim() != 2 || edges.shape(1) != 2) throw ParameterError("edges must have shape (m, 2)");
  const auto m = edges.shape(0);
  if (weights && weights->size() != m) throw ParameterError("one weight per edge");
  auto e = edges.unchecked<2>();
  std::vector<Edge> list;
  list.reserve(static_cast<std::size_t>(m));
  for (py::ssize_t r = 0; r < m; ++r) {
    list.push_back({e(r, 0), e(r, 1), weights ? weights->data()[r] : 1.0});
  }
  return AdjacencyMatrix::from_edges(n, list, directed, weights.has_value());
}

AdjacencyMatrix network_from_dense(const DenseMatrix& m, bool directed, bool weighted) {
  if (m.rows() != m.cols()) throw ParameterError("adjacency must be square");
  std::vector<Edge> list;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = directed ? 0 : i + 1; j < m.cols(); ++j) {
      if (i != j && m(i, j) != 0.0) list.push_back({i, j, m(i, j)});
    }
  }
  return AdjacencyMatrix::from_edges(m.rows(), list, directed, weighted);
}

py::dict instance_dict(PlantedInstance pi) {
  py::dict d;
  d["A"] = std::move(pi.A);
  d["M"] = std::move(pi.M);
  if (pi.truth) {
    d["truth"] = pi.truth->labels();
  } else {
    d["truth"] = py::none();
  }
  d["clip_fraction"] = pi.clip_fraction;
  d["infeasible"] = pi.infeasible;
  return d;
}

EcvConfig make_config(double p, int n_splits, std::uint64_t seed) {
  EcvConfig c;
  c.p = p;
  c.n_splits = n_splits;
  c.seed = seed;
  return c;
}

CommunityAssignment labels_from(const std::vector<int>& v) {
  int k = 1;
  for (int x : v) k = std::max(k, x + 1);
  return CommunityAssignment(v, k);
}

}  // namespace

PYBIND11_MODULE(_ecvnet, m) {
  m.doc() = "Edge cross-validation for network model selection";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);

  py::class_<AdjacencyMatrix>(m, "Network")
      .def_static("from_edges", &network_from_edges, py::arg("n"), py::arg("edges"),
                  py::arg("weights") = py::none(), py::arg("directed") = false)
      .def_static("from_dense", &network_from_dense, py::arg("matrix"), py::arg("directed") = false,
                  py::arg("weighted") = false)
      .def_static("load", [](const std::string& path, bool directed, bool weighted) {
        return load_edge_list(path, directed, weighted);
      }, py::arg("path"), py::arg("directed") = false, py::arg("weighted") = false)
      .def("save", [](const AdjacencyMatrix& a, const std::string& path) { save_edge_list(path, a); })
      .def_property_readonly("n", &AdjacencyMatrix::n)
      .def_property_readonly("directed", &AdjacencyMatrix::directed)
      .def_property_readonly("weighted", &AdjacencyMatrix::weighted)
      .def_property_readonly("nnz", &AdjacencyMatrix::nnz)
      .def("weight", &AdjacencyMatrix::weight)
      .def("dense", &AdjacencyMatrix::dense)
      .def("__repr__", [](const AdjacencyMatrix& a) {
        return "<Network n=" + std::to_string(a.n()) + " nnz=" + std::to_string(a.nnz()) +
               (a.directed() ? " directed" : "") + (a.weighted() ? " weighted" : "") + ">";
      });

  py::class_<CandidateId>(m, "Candidate")
      .def_property_readonly("family", [](const CandidateId& c) { return std::string(family_name(c.family)); })
      .def_readonly("value", &CandidateId::value)
      .def("__str__", [](const CandidateId& c) { return to_string(c); })
      .def("__repr__", [](const CandidateId& c) { return "<Candidate " + to_string(c) + ">"; })
      .def("__eq__", [](const CandidateId& a, const CandidateId& b) { return a == b; });

  py::class_<SelectionResult>(m, "SelectionResult")
      .def_readonly("candidates", &SelectionResult::candidates)
      .def_readonly("losses", &SelectionResult::losses)
      .def_readonly("mean_loss", &SelectionResult::mean_loss)
      .def_readonly("chosen", &SelectionResult::chosen)
      .def_readonly("per_rep_choices", &SelectionResult::per_rep_choices);

  m.def("gen_block_model", [](Index n, int k, double lambda, double t, double beta, bool degree_corrected,
                              std::uint64_t seed) {
    BlockDesign d{n, k, lambda, t, beta, degree_corrected};
    Rng rng(seed);
    return instance_dict(gen_block_model(d, rng));
  }, py::arg("n") = 600, py::arg("K") = 3, py::arg("lam") = 40.0, py::arg("t") = 0.0, py::arg("beta") = 0.2,
        py::arg("degree_corrected") = false, py::arg("seed") = 1);
  m.def("gen_rdpg_directed", [](Index n, int k, std::uint64_t seed) {
    Rng rng(seed);
    return instance_dict(gen_rdpg_directed(n, k, rng));
  }, py::arg("n"), py::arg("K"), py::arg("seed") = 1);
  m.def("gen_graphon", [](Index n, const std::string& kind, std::uint64_t seed) {
    Rng rng(seed);
    return instance_dict(gen_graphon(n, parse_graphon_kind(kind), rng));
  }, py::arg("n"), py::arg("kind") = "piecewise", py::arg("seed") = 1);

  m.def("partial_svd", [](const DenseMatrix& a, Index k, std::uint64_t seed, double tol) {
    Rng rng(seed);
    auto r = partial_svd(a, k, rng, SvdOptions{10, tol});
    return py::make_tuple(r.U, r.sigma, r.V);
  }, py::arg("matrix"), py::arg("k"), py::arg("seed") = 1, py::arg("tol") = 1e-11);
  m.def("complete", [](const AdjacencyMatrix& a, Index rank, double p, std::uint64_t seed) {
    Rng rng(seed);
    const auto mask = p >= 1.0 ? HoldoutMask::full(a.n(), a.directed()) : sample_mask(a.n(), p, a.directed(), rng);
    const auto c = complete(a, mask, rank, rng);
    return py::make_tuple(c.U(), c.sigma(), c.V());
  }, py::arg("A"), py::arg("rank"), py::arg("p") = 0.9, py::arg("seed") = 1,
        "Rank-`rank` completion of a random training split; returns (U, sigma, V).");

  m.def("select_block_model", [](const AdjacencyMatrix& a, int kmax, const std::string& loss, double p, int n_splits,
                                 std::uint64_t seed) {
    return select_block_model(a, kmax, parse_loss(loss), make_config(p, n_splits, seed));
  }, py::arg("A"), py::arg("kmax") = 6, py::arg("loss") = "l2", py::arg("p") = 0.9, py::arg("n_splits") = 3,
        py::arg("seed") = 1);
  m.def("select_rank", [](const AdjacencyMatrix& a, int kmax, const std::string& loss, double p, int n_splits,
                          std::uint64_t seed) {
    return select_rank(a, kmax, parse_loss(loss), make_config(p, n_splits, seed));
  }, py::arg("A"), py::arg("kmax") = 8, py::arg("loss") = "sse", py::arg("p") = 0.9, py::arg("n_splits") = 3,
        py::arg("seed") = 1);
  m.def("tune_regularization", [](const AdjacencyMatrix& a, const std::vector<double>& grid, int k, double p,
                                  int n_splits, std::uint64_t seed) {
    auto r = tune_regularization(a, grid, k, make_config(p, n_splits, seed));
    return py::make_tuple(r.selection, r.chosen_labels().labels());
  }, py::arg("A"), py::arg("tau_grid"), py::arg("K"), py::arg("p") = 0.9, py::arg("n_splits") = 3,
        py::arg("seed") = 1, "Returns (SelectionResult, labels at the chosen tau).");
  m.def("tune_graphon", [](const AdjacencyMatrix& a, const std::vector<double>& grid, int kmax, double p,
                           int n_splits, std::uint64_t seed) {
    return tune_graphon(a, grid, kmax, make_config(p, n_splits, seed));
  }, py::arg("A"), py::arg("tau_grid"), py::arg("kmax") = 10, py::arg("p") = 0.9, py::arg("n_splits") = 3,
        py::arg("seed") = 1);
  m.def("stability_select", [](const std::vector<CandidateId>& choices, const std::string& mode) {
    if (mode != "mode" && mode != "avg") throw ParameterError("mode must be 'mode' or 'avg'");
    return stability_select(choices, mode == "mode" ? StabilityMode::kMostFrequent : StabilityMode::kAverage);
  }, py::arg("choices"), py::arg("mode") = "mode");

  m.def("neighborhood_smoothing", [](const DenseMatrix& w, double h) {
    return neighborhood_smoothing(w, SmootherConfig{h, true});
  }, py::arg("W"), py::arg("h"));
  m.def("spectral_clustering", [](const DenseMatrix& a, int k, bool spherical, std::uint64_t seed) {
    Rng rng(seed);
    const auto c = spherical ? spherical_spectral_clustering(a, k, rng) : spectral_clustering(a, k, rng);
    return c.labels();
  }, py::arg("matrix"), py::arg("k"), py::arg("spherical") = false, py::arg("seed") = 1);

  m.def("auc", [](const std::vector<double>& t, const std::vector<double>& s) { return auc(t, s); },
        py::arg("truths"), py::arg("scores"));
  m.def("sse_loss", [](const std::vector<double>& t, const std::vector<double>& s) { return sse_loss(t, s); },
        py::arg("truths"), py::arg("preds"));
  m.def("deviance_loss", [](const std::vector<double>& t, const std::vector<double>& s) {
    return deviance_loss(t, s);
  }, py::arg("truths"), py::arg("preds"));
  m.def("nmi", [](const std::vector<int>& a, const std::vector<int>& b) {
    return nmi(labels_from(a), labels_from(b));
  });
  m.def("clustering_accuracy", [](const std::vector<int>& est, const std::vector<int>& truth) {
    return clustering_accuracy(labels_from(est), labels_from(truth));
  });
  m.def("ccd", [](const std::vector<int>& a, const std::vector<int>& b, const std::vector<NodePair>& pairs) {
    return ccd(labels_from(a), labels_from(b), pairs);
  });
}
