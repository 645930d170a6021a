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

// Command-line front end: model selection, tuning, completion and the
// simulation harness.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecv/bench.hpp"
#include "ecv/graphon.hpp"
#include "ecv/holdout.hpp"
#include "ecv/lowrank.hpp"
#include "ecv/netgraph.hpp"
#include "ecv/selection.hpp"
#include "ecv/simgen.hpp"

namespace {

using namespace ecv;

struct InputOpts {
  std::string input;
  bool directed = false;
  bool weighted = false;
  std::string gen;
  BlockDesign design;
  std::string graphon = "piecewise";
  std::uint64_t gen_seed = 1;
};

struct EcvOpts {
  double p = 0.9;
  int n_splits = 3;
  std::uint64_t seed = 1;
  std::string stability = "none";
  int stability_reps = 20;
  std::string out;
  std::string format = "csv";
};

void add_input(CLI::App* app, InputOpts& o) {
  app->add_option("--input", o.input, "edge list file");
  app->add_flag("--directed", o.directed, "treat the edge list as directed");
  app->add_flag("--weighted", o.weighted, "read a weight column");
  app->add_option("--gen", o.gen, "generate instead of reading: sbm, dcsbm, rdpg, graphon")
      ->check(CLI::IsMember({"sbm", "dcsbm", "rdpg", "graphon"}));
  app->add_option("--n", o.design.n, "nodes (generator)")->check(CLI::PositiveNumber);
  app->add_option("--k", o.design.K, "communities or latent rank")->check(CLI::PositiveNumber);
  app->add_option("--lambda", o.design.lambda, "expected mean degree (generator)")->check(CLI::PositiveNumber);
  app->add_option("--t", o.design.t, "community size exponent (generator)")->check(CLI::NonNegativeNumber);
  app->add_option("--beta", o.design.beta, "out-in ratio (generator)")->check(CLI::Range(0.0, 1.0));
  app->add_option("--graphon", o.graphon, "piecewise or smooth");
  app->add_option("--gen-seed", o.gen_seed, "generator seed");
}

void add_ecv(CLI::App* app, EcvOpts& o) {
  app->add_option("--p", o.p, "training fraction of node pairs");
  app->add_option("--n-splits", o.n_splits, "number of random splits")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--stability", o.stability, "none, mode, avg or both")
      ->check(CLI::IsMember({"none", "mode", "avg", "both"}));
  app->add_option("--stability-reps", o.stability_reps, "repetitions for stability selection")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "write the full result here");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

struct Loaded {
  AdjacencyMatrix A;
  std::optional<CommunityAssignment> truth;
};

Loaded load_input(const InputOpts& o) {
  if (!o.input.empty() && !o.gen.empty()) throw ParameterError("use either --input or --gen, not both");
  if (!o.input.empty()) return {load_edge_list(o.input, o.directed, o.weighted), std::nullopt};
  if (o.gen.empty()) throw ParameterError("need --input or --gen");
  Rng rng(o.gen_seed);
  PlantedInstance pi;
  if (o.gen == "sbm" || o.gen == "dcsbm") {
    BlockDesign d = o.design;
    d.degree_corrected = o.gen == "dcsbm";
    pi = gen_block_model(d, rng);
  } else if (o.gen == "rdpg") {
    pi = gen_rdpg_directed(o.design.n, o.design.K, rng);
  } else {
    pi = gen_graphon(o.design.n, parse_graphon_kind(o.graphon), rng);
  }
  return {std::move(pi.A), std::move(pi.truth)};
}

EcvConfig ecv_config(const EcvOpts& o) {
  EcvConfig c;
  c.p = o.p;
  c.n_splits = o.n_splits;
  c.seed = o.seed;
  return c;
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_number(v); }

void write_result(const SelectionResult& r, const EcvOpts& o, const std::vector<std::pair<std::string, CandidateId>>& extra) {
  if (o.out.empty()) return;
  std::ofstream out(o.out);
  if (!out) throw Error("cannot write " + o.out);
  if (o.format == "json") {
    nlohmann::json j;
    j["chosen"] = to_string(r.chosen);
    j["seed"] = o.seed;
    j["p"] = o.p;
    j["n_splits"] = o.n_splits;
    auto& cands = j["candidates"] = nlohmann::json::array();
    for (std::size_t q = 0; q < r.candidates.size(); ++q) {
      nlohmann::json c;
      c["candidate"] = to_string(r.candidates[q]);
      c["family"] = std::string(family_name(r.candidates[q].family));
      c["value"] = r.candidates[q].value;
      c["mean_loss"] = std::isnan(r.mean_loss[q]) ? nlohmann::json(nullptr) : nlohmann::json(r.mean_loss[q]);
      auto& split = c["split_losses"] = nlohmann::json::array();
      for (Index m = 0; m < r.losses.rows(); ++m) {
        const double v = r.losses(m, static_cast<Index>(q));
        split.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
      }
      cands.push_back(c);
    }
    auto& reps = j["per_rep_choices"] = nlohmann::json::array();
    for (const auto& c : r.per_rep_choices) reps.push_back(to_string(c));
    for (const auto& [name, c] : extra) j[name] = to_string(c);
    out << j.dump(2) << '\n';
    return;
  }
  out << "candidate,family,value,chosen,mean_loss";
  for (Index m = 0; m < r.losses.rows(); ++m) out << ",split_" << m;
  out << '\n';
  for (std::size_t q = 0; q < r.candidates.size(); ++q) {
    const auto& c = r.candidates[q];
    out << to_string(c) << ',' << family_name(c.family) << ',' << format_number(c.value) << ','
        << (c == r.chosen ? 1 : 0) << ',' << cell(r.mean_loss[q]);
    for (Index m = 0; m < r.losses.rows(); ++m) out << ',' << cell(r.losses(m, static_cast<Index>(q)));
    out << '\n';
  }
}

// Runs `select` once or with stability repetitions, prints and writes.
int report(const std::function<SelectionResult(std::uint64_t)>& select, const EcvOpts& o) {
  const auto mode = parse_stability(o.stability);
  const int reps = mode == Stability::kNone ? 1 : o.stability_reps;
  SelectionResult r = repeat_selection(select, reps, o.seed);
  std::cout << "chosen: " << to_string(r.chosen) << '\n';
  std::vector<std::pair<std::string, CandidateId>> extra;
  if (mode == Stability::kMode || mode == Stability::kBoth) {
    const auto c = stability_select(r.per_rep_choices, StabilityMode::kMostFrequent);
    std::cout << "mode: " << to_string(c) << '\n';
    extra.emplace_back("mode", c);
  }
  if (mode == Stability::kAvg || mode == Stability::kBoth) {
    const auto c = stability_select(r.per_rep_choices, StabilityMode::kAverage);
    std::cout << "avg: " << to_string(c) << '\n';
    extra.emplace_back("avg", c);
  }
  write_result(r, o, extra);
  return 0;
}

void write_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge cross-validation for network model selection"};
  app.require_subcommand(1);

  InputOpts in;
  EcvOpts ecv;

  auto* sel_model = app.add_subcommand("select-model", "choose between SBM and DCSBM and their K");
  int kmax_model = 6;
  std::string loss_model = "l2";
  add_input(sel_model, in);
  add_ecv(sel_model, ecv);
  sel_model->add_option("--kmax", kmax_model, "largest K")->check(CLI::PositiveNumber);
  sel_model->add_option("--loss", loss_model, "l2 or deviance")->check(CLI::IsMember({"l2", "deviance"}));

  auto* sel_rank = app.add_subcommand("select-rank", "choose the rank K");
  int kmax_rank = 8;
  std::string loss_rank = "sse";
  add_input(sel_rank, in);
  add_ecv(sel_rank, ecv);
  sel_rank->add_option("--kmax", kmax_rank, "largest K")->check(CLI::PositiveNumber);
  sel_rank->add_option("--loss", loss_rank, "sse (alias l2), auc or deviance")
      ->check(CLI::IsMember({"sse", "l2", "auc", "deviance"}));

  auto* tune_reg = app.add_subcommand("tune-reg", "tune Laplacian regularization");
  std::vector<double> reg_grid;
  for (int i = 1; i <= 20; ++i) reg_grid.push_back(i / 10.0);
  add_input(tune_reg, in);
  add_ecv(tune_reg, ecv);
  tune_reg->add_option("--tau-grid", reg_grid, "candidate tau values")->delimiter(',');

  auto* tune_gr = app.add_subcommand("tune-graphon", "tune the neighborhood smoothing bandwidth");
  std::vector<double> graphon_grid{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
  int kmax_graphon = 10;
  add_input(tune_gr, in);
  add_ecv(tune_gr, ecv);
  tune_gr->add_option("--tau-grid", graphon_grid, "candidate tau values")->delimiter(',');
  tune_gr->add_option("--kmax", kmax_graphon, "largest completion rank")->check(CLI::PositiveNumber);

  auto* comp = app.add_subcommand("complete", "low-rank completion of a training matrix");
  Index rank = 0;
  bool allow_full = false;
  std::string factors;
  std::optional<double> clip_lo, clip_hi;
  add_input(comp, in);
  comp->add_option("--rank", rank, "completion rank")->required()->check(CLI::PositiveNumber);
  comp->add_option("--p", ecv.p, "training fraction of node pairs");
  comp->add_flag("--allow-full", allow_full, "accept p = 1 (no held-out pairs)");
  comp->add_option("--seed", ecv.seed, "seed");
  comp->add_option("--out", ecv.out, "dense matrix output");
  comp->add_option("--factors", factors, "write PREFIX.U.txt, PREFIX.sigma.txt, PREFIX.V.txt");
  comp->add_option("--clip-lo", clip_lo, "lower bound for dense output");
  comp->add_option("--clip-hi", clip_hi, "upper bound for dense output");

  auto* sim = app.add_subcommand("simulate", "run an experiment from a config file");
  std::string config_path, sim_out, sim_summary;
  int sim_threads = 0;
  sim->add_option("--config", config_path, "experiment config")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "CSV output (overrides the config)");
  sim->add_option("--summary", sim_summary, "JSON summary (overrides the config)");
  sim->add_option("--threads", sim_threads, "worker threads")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("generate", "write a synthetic network as an edge list");
  std::string gen_out, truth_out;
  add_input(gen, in);
  gen->add_option("--out", gen_out, "edge list output")->required();
  gen->add_option("--truth", truth_out, "community labels output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sel_model) {
      const auto net = load_input(in);
      const auto loss = parse_loss(loss_model);
      const auto base = ecv_config(ecv);
      return report([&](std::uint64_t s) {
        EcvConfig c = base;
        c.seed = s;
        return select_block_model(net.A, kmax_model, loss, c);
      }, ecv);
    }
    if (*sel_rank) {
      const auto net = load_input(in);
      const auto loss = parse_loss(loss_rank);
      const auto base = ecv_config(ecv);
      return report([&](std::uint64_t s) {
        EcvConfig c = base;
        c.seed = s;
        return select_rank(net.A, kmax_rank, loss, c);
      }, ecv);
    }
    if (*tune_reg) {
      const auto net = load_input(in);
      const auto base = ecv_config(ecv);
      return report([&](std::uint64_t s) {
        EcvConfig c = base;
        c.seed = s;
        return tune_regularization(net.A, reg_grid, in.design.K, c).selection;
      }, ecv);
    }
    if (*tune_gr) {
      const auto net = load_input(in);
      const auto base = ecv_config(ecv);
      return report([&](std::uint64_t s) {
        EcvConfig c = base;
        c.seed = s;
        return tune_graphon(net.A, graphon_grid, kmax_graphon, c);
      }, ecv);
    }
    if (*comp) {
      if (ecv.p >= 1.0 && !allow_full) {
        std::cerr << "error: --p 1 leaves no held-out pairs; pass --allow-full for completion only\n";
        return 2;
      }
      if (!(ecv.p > 0.0 && ecv.p <= 1.0)) throw ParameterError("--p must lie in (0, 1]");
      const auto net = load_input(in);
      Rng rng(ecv.seed);
      const auto mask = ecv.p >= 1.0 ? HoldoutMask::full(net.A.n(), net.A.directed())
                                     : sample_mask(net.A.n(), ecv.p, net.A.directed(), rng);
      const auto ahat = complete(net.A, mask, rank, rng, SvdOptions{});
      if (!ecv.out.empty()) {
        const double lo = clip_lo.value_or(-std::numeric_limits<double>::infinity());
        const double hi = clip_hi.value_or(std::numeric_limits<double>::infinity());
        write_matrix(ecv.out, truncate_entries(ahat, lo, hi));
      }
      if (!factors.empty()) {
        write_matrix(factors + ".U.txt", ahat.U());
        write_matrix(factors + ".sigma.txt", ahat.sigma());
        write_matrix(factors + ".V.txt", ahat.V());
      }
      std::cout << "singular values:";
      for (Index k = 0; k < ahat.rank(); ++k) std::cout << ' ' << format_number(ahat.sigma()(k));
      std::cout << '\n';
      return 0;
    }
    if (*sim) {
      auto cfg = load_config(config_path);
      if (!sim_out.empty()) cfg.output = sim_out;
      if (!sim_summary.empty()) cfg.summary = sim_summary;
      if (sim_threads > 0) cfg.threads = sim_threads;
      const auto out = run_experiment_to_files(cfg);
      std::cout << "rows: " << out.rows.size() << "  failures: " << out.failures << '\n';
      return out.failures == cfg.replications ? 1 : 0;
    }
    if (*gen) {
      if (in.gen.empty()) throw ParameterError("generate needs --gen");
      const auto net = load_input(in);
      save_edge_list(gen_out, net.A);
      if (!truth_out.empty() && net.truth) {
        std::ofstream t(truth_out);
        if (!t) throw Error("cannot write " + truth_out);
        write_truth(t, *net.truth);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
