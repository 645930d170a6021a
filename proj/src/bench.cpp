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

#include "ecv/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ecv/graphon.hpp"
#include "ecv/metrics.hpp"

namespace ecv {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() == 1 && out.front().empty()) out.clear();
  return out;
}

template <typename T>
T parse_number(const std::string& s, int line) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError(line, "bad number '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, int line) {
  const auto u = upper(s);
  if (u == "TRUE" || u == "1" || u == "YES") return true;
  if (u == "FALSE" || u == "0" || u == "NO") return false;
  throw ParseError(line, "bad boolean '" + s + "'");
}

double spectral_norm(const DenseMatrix& m) {
  Rng rng(0x5eed);
  return partial_svd(m, 1, rng, SvdOptions{10, 1e-10}).sigma(0);
}

double relative_error(const DenseMatrix& est, const DenseMatrix& truth) {
  return (est - truth).norm() / truth.norm();
}

// Loaded network or generated instance for one replication.
struct Instance {
  AdjacencyMatrix A;
  std::optional<CommunityAssignment> truth;
  std::optional<DenseMatrix> M;
};

Instance make_instance(const ExperimentConfig& cfg, const Instance* file, int rep) {
  if (cfg.generator == Generator::kFile) return *file;
  Rng rng(derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(rep)));
  PlantedInstance pi;
  switch (cfg.generator) {
    case Generator::kSBM:
    case Generator::kDCSBM: {
      BlockDesign d = cfg.design;
      d.degree_corrected = cfg.generator == Generator::kDCSBM;
      pi = gen_block_model(d, rng);
      break;
    }
    case Generator::kRDPG:
      pi = gen_rdpg_directed(cfg.design.n, cfg.design.K, rng);
      break;
    case Generator::kGraphon:
      pi = gen_graphon(cfg.design.n, cfg.graphon, rng);
      break;
    case Generator::kFile:
      break;
  }
  return {std::move(pi.A), std::move(pi.truth), std::move(pi.M)};
}

std::string model_label(const ExperimentConfig& cfg) {
  switch (cfg.generator) {
    case Generator::kSBM:
      return "SBM";
    case Generator::kDCSBM:
      return "DCSBM";
    case Generator::kRDPG:
      return "RDPG";
    case Generator::kGraphon:
      return "graphon:" + std::string(graphon_name(cfg.graphon));
    case Generator::kFile:
      return "file";
  }
  return "";
}

ResultRow base_row(const ExperimentConfig& cfg, const Instance& inst, int rep) {
  ResultRow row;
  row.rep = rep;
  row.n = inst.A.n();
  row.model_true = model_label(cfg);
  const bool block = cfg.generator == Generator::kSBM || cfg.generator == Generator::kDCSBM;
  if (block || cfg.generator == Generator::kRDPG) row.K_true = cfg.design.K;
  if (block) {
    row.lambda = cfg.design.lambda;
    row.t = cfg.design.t;
    row.beta = cfg.design.beta;
  }
  return row;
}

std::string method_suffix(Task task, LossKind loss) {
  if (task == Task::kSelectRank) {
    if (loss == LossKind::kL2) return "SSE";
    if (loss == LossKind::kAUC) return "AUC";
    return "dev";
  }
  return loss == LossKind::kL2 ? "l2" : "dev";
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::optional<double> loss_of(const SelectionResult& r, const CandidateId& c) {
  for (std::size_t q = 0; q < r.candidates.size(); ++q) {
    if (r.candidates[q] == c && !std::isnan(r.mean_loss[q])) return r.mean_loss[q];
  }
  return std::nullopt;
}

// Runs a multi-loss driver once per stability repetition.
struct StabilityRuns {
  std::vector<SelectionResult> first;
  std::vector<std::vector<CandidateId>> choices;
};

template <typename Fn>
StabilityRuns run_with_stability(const ExperimentConfig& cfg, std::uint64_t seed, double p, int n_splits,
                                 Fn&& select) {
  const int reps = cfg.stability == Stability::kNone ? 1 : cfg.stability_reps;
  StabilityRuns out;
  for (int s = 0; s < reps; ++s) {
    EcvConfig ecfg;
    ecfg.p = p;
    ecfg.n_splits = n_splits;
    ecfg.seed = derive_seed(seed, static_cast<std::uint64_t>(s));
    std::vector<SelectionResult> res = select(ecfg);
    if (s == 0) {
      out.choices.resize(res.size());
      out.first = res;
    }
    for (std::size_t l = 0; l < res.size(); ++l) out.choices[l].push_back(res[l].chosen);
  }
  return out;
}

// One row per method variant: the single run, then mode and average.
template <typename Decorate>
void emit_rows(const ExperimentConfig& cfg, const ResultRow& base, const std::string& tag,
               const SelectionResult& first, const std::vector<CandidateId>& choices, Decorate&& decorate,
               std::vector<ResultRow>& rows) {
  auto make = [&](const std::string& method, std::optional<CandidateId> chosen) {
    ResultRow row = base;
    row.method = method;
    if (chosen) {
      row.family_hat = family_name(chosen->family);
      row.value_hat = chosen->value;
      row.loss_best = loss_of(first, *chosen);
    } else {
      row.family_hat = "mixed";
    }
    decorate(row, chosen);
    rows.push_back(std::move(row));
  };
  {
    make(tag, first.chosen);
    auto& row = rows.back();
    for (std::size_t q = 0; q < first.candidates.size(); ++q) {
      if (!std::isnan(first.mean_loss[q])) row.mean_losses.emplace_back(to_string(first.candidates[q]), first.mean_loss[q]);
    }
  }
  if (cfg.stability == Stability::kMode || cfg.stability == Stability::kBoth) {
    make(tag + "-mode", stability_select(choices, StabilityMode::kMostFrequent));
  }
  if (cfg.stability == Stability::kAvg || cfg.stability == Stability::kBoth) {
    std::optional<CandidateId> avg;
    try {
      avg = stability_select(choices, StabilityMode::kAverage);
    } catch (const ParameterError&) {
    }
    make(tag + "-avg", avg);
  }
}

void model_selection_rows(const ExperimentConfig& cfg, const Instance& inst, const ResultRow& base,
                          std::uint64_t seed, double p, int n_splits, std::vector<ResultRow>& rows) {
  const auto t0 = std::chrono::steady_clock::now();
  auto runs = run_with_stability(cfg, seed, p, n_splits, [&](const EcvConfig& e) {
    return select_block_model(inst.A, cfg.kmax, cfg.losses, e);
  });
  const double ms = elapsed_ms(t0);
  std::optional<CandidateId> truth;
  if (cfg.generator == Generator::kSBM) truth = sbm(cfg.design.K);
  if (cfg.generator == Generator::kDCSBM) truth = dcsbm(cfg.design.K);
  ResultRow b = base;
  b.p = p;
  b.N = n_splits;
  b.ms = ms;
  for (std::size_t l = 0; l < cfg.losses.size(); ++l) {
    emit_rows(cfg, b, "ECV-" + method_suffix(cfg.task, cfg.losses[l]), runs.first[l], runs.choices[l],
              [&](ResultRow& row, const std::optional<CandidateId>& c) {
                if (truth) row.correct = c && *c == *truth;
              },
              rows);
  }
}

void rank_selection_rows(const ExperimentConfig& cfg, const Instance& inst, const ResultRow& base,
                         std::uint64_t seed, std::vector<ResultRow>& rows) {
  const double p = cfg.p_grid.front();
  const int n_splits = cfg.n_splits_grid.front();
  const auto t0 = std::chrono::steady_clock::now();
  auto runs = run_with_stability(cfg, seed, p, n_splits, [&](const EcvConfig& e) {
    return select_rank(inst.A, cfg.kmax, cfg.losses, e);
  });
  ResultRow b = base;
  b.p = p;
  b.N = n_splits;
  b.ms = elapsed_ms(t0);
  for (std::size_t l = 0; l < cfg.losses.size(); ++l) {
    emit_rows(cfg, b, "ECV-" + method_suffix(cfg.task, cfg.losses[l]), runs.first[l], runs.choices[l],
              [&](ResultRow& row, const std::optional<CandidateId>& c) {
                if (base.K_true) row.correct = c && c->K() == *base.K_true;
              },
              rows);
  }
}

void regularization_rows(const ExperimentConfig& cfg, const Instance& inst, const ResultRow& base,
                         std::uint64_t seed, std::vector<ResultRow>& rows) {
  const double p = cfg.p_grid.front();
  const int n_splits = cfg.n_splits_grid.front();
  const int k = cfg.design.K;
  std::optional<RegularizationTuning> first;
  const auto t0 = std::chrono::steady_clock::now();
  auto runs = run_with_stability(cfg, seed, p, n_splits, [&](const EcvConfig& e) {
    auto tuned = tune_regularization(inst.A, cfg.tau_grid, k, e);
    if (!first) first = tuned;
    return std::vector<SelectionResult>{tuned.selection};
  });
  ResultRow b = base;
  b.p = p;
  b.N = n_splits;
  b.ms = elapsed_ms(t0);

  const auto& grid = first->selection.candidates;
  auto labels_at = [&](double tau) {
    for (std::size_t q = 0; q < grid.size(); ++q) {
      if (grid[q].value == tau) return first->full_labels[q];
    }
    Rng rng(derive_seed(seed, 0xA7A7ULL));
    return regularized_spectral_clustering(inst.A.dense(), tau, k, rng);
  };
  emit_rows(cfg, b, "ECV-CCD", runs.first[0], runs.choices[0],
            [&](ResultRow& row, const std::optional<CandidateId>& c) {
              if (inst.truth && c) row.quality = clustering_accuracy(labels_at(c->value), *inst.truth);
            },
            rows);
  for (std::size_t q = 0; q < grid.size(); ++q) {
    ResultRow row = b;
    row.method = "fixed";
    row.family_hat = family_name(Family::kTauReg);
    row.value_hat = grid[q].value;
    if (!std::isnan(first->selection.mean_loss[q])) row.loss_best = first->selection.mean_loss[q];
    if (inst.truth) row.quality = clustering_accuracy(first->full_labels[q], *inst.truth);
    rows.push_back(std::move(row));
  }
}

void graphon_rows(const ExperimentConfig& cfg, const Instance& inst, const ResultRow& base,
                  std::uint64_t seed, std::vector<ResultRow>& rows) {
  const double p = cfg.p_grid.front();
  const int n_splits = cfg.n_splits_grid.front();
  const auto t0 = std::chrono::steady_clock::now();
  auto runs = run_with_stability(cfg, seed, p, n_splits, [&](const EcvConfig& e) {
    return std::vector<SelectionResult>{tune_graphon(inst.A, cfg.tau_grid, cfg.kmax, e)};
  });
  ResultRow b = base;
  b.p = p;
  b.N = n_splits;
  b.ms = elapsed_ms(t0);

  const Index n = inst.A.n();
  std::optional<NeighborhoodSmoother> smoother;
  if (inst.M) smoother.emplace(inst.A.dense());
  std::map<double, double> cache;
  auto error_at = [&](double tau) -> std::optional<double> {
    const double h = smoothing_bandwidth(tau, n);
    if (!smoother || !(h > 0.0 && h < 1.0)) return std::nullopt;
    auto it = cache.find(tau);
    if (it == cache.end()) it = cache.emplace(tau, relative_error(smoother->smooth({h, true}), *inst.M)).first;
    return it->second;
  };
  emit_rows(cfg, b, "ECV-SSE", runs.first[0], runs.choices[0],
            [&](ResultRow& row, const std::optional<CandidateId>& c) {
              if (c) row.quality = error_at(c->value);
            },
            rows);
  const auto& first = runs.first[0];
  for (std::size_t q = 0; q < first.candidates.size(); ++q) {
    ResultRow row = b;
    row.method = "fixed";
    row.family_hat = family_name(Family::kTauGraphon);
    row.value_hat = first.candidates[q].value;
    if (!std::isnan(first.mean_loss[q])) row.loss_best = first.mean_loss[q];
    row.quality = error_at(first.candidates[q].value);
    rows.push_back(std::move(row));
  }
}

void concentration_rows(const ExperimentConfig& cfg, const Instance& inst, const ResultRow& base,
                        std::uint64_t seed, std::vector<ResultRow>& rows) {
  const DenseMatrix& m = *inst.M;
  const double noise = spectral_norm(inst.A.dense() - m);
  for (std::size_t i = 0; i < cfg.p_grid.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(derive_seed(seed, i));
    const auto mask = sample_mask(inst.A.n(), cfg.p_grid[i], inst.A.directed(), rng);
    const auto ahat = complete(inst.A, mask, cfg.design.K, rng);
    ResultRow row = base;
    row.p = cfg.p_grid[i];
    row.method = "completion";
    row.family_hat = family_name(Family::kRank);
    row.value_hat = cfg.design.K;
    row.quality = spectral_norm(ahat.dense() - m) / noise;
    row.ms = elapsed_ms(t0);
    rows.push_back(std::move(row));
  }
}

std::vector<ResultRow> run_replication(const ExperimentConfig& cfg, const Instance* file, int rep) {
  const Instance inst = make_instance(cfg, file, rep);
  const auto seed = derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(rep) + 1);
  const ResultRow base = base_row(cfg, inst, rep);
  std::vector<ResultRow> rows;
  switch (cfg.task) {
    case Task::kSelectModel:
      model_selection_rows(cfg, inst, base, seed, cfg.p_grid.front(), cfg.n_splits_grid.front(), rows);
      break;
    case Task::kSweepPN:
      for (double p : cfg.p_grid) {
        for (int n_splits : cfg.n_splits_grid) model_selection_rows(cfg, inst, base, seed, p, n_splits, rows);
      }
      break;
    case Task::kSelectRank:
      rank_selection_rows(cfg, inst, base, seed, rows);
      break;
    case Task::kTuneReg:
      regularization_rows(cfg, inst, base, seed, rows);
      break;
    case Task::kTuneGraphon:
      graphon_rows(cfg, inst, base, seed, rows);
      break;
    case Task::kConcentration:
      concentration_rows(cfg, inst, base, seed, rows);
      break;
  }
  return rows;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Task parse_task(std::string_view s) {
  const auto u = upper(s);
  if (u == "SELECT_MODEL") return Task::kSelectModel;
  if (u == "SELECT_RANK") return Task::kSelectRank;
  if (u == "TUNE_REG") return Task::kTuneReg;
  if (u == "TUNE_GRAPHON") return Task::kTuneGraphon;
  if (u == "SWEEP_PN") return Task::kSweepPN;
  if (u == "CONCENTRATION") return Task::kConcentration;
  throw ParameterError("unknown task '" + std::string(s) + "'");
}

std::string_view task_name(Task t) {
  switch (t) {
    case Task::kSelectModel:
      return "SELECT_MODEL";
    case Task::kSelectRank:
      return "SELECT_RANK";
    case Task::kTuneReg:
      return "TUNE_REG";
    case Task::kTuneGraphon:
      return "TUNE_GRAPHON";
    case Task::kSweepPN:
      return "SWEEP_PN";
    case Task::kConcentration:
      return "CONCENTRATION";
  }
  return "";
}

Generator parse_generator(std::string_view s) {
  const auto u = upper(s);
  if (u == "SBM") return Generator::kSBM;
  if (u == "DCSBM") return Generator::kDCSBM;
  if (u == "RDPG") return Generator::kRDPG;
  if (u == "GRAPHON") return Generator::kGraphon;
  if (u == "FILE") return Generator::kFile;
  throw ParameterError("unknown generator '" + std::string(s) + "'");
}

Stability parse_stability(std::string_view s) {
  const auto u = upper(s);
  if (u == "NONE") return Stability::kNone;
  if (u == "MODE") return Stability::kMode;
  if (u == "AVG") return Stability::kAvg;
  if (u == "BOTH") return Stability::kBoth;
  throw ParameterError("unknown stability mode '" + std::string(s) + "'");
}

std::string_view stability_name(Stability s) {
  switch (s) {
    case Stability::kNone:
      return "none";
    case Stability::kMode:
      return "mode";
    case Stability::kAvg:
      return "avg";
    case Stability::kBoth:
      return "both";
  }
  return "";
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  bool have_input = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    if (cfg.raw.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");

    try {
      if (key == "task") {
        cfg.task = parse_task(value);
      } else if (key == "generator") {
        cfg.generator = parse_generator(value);
      } else if (key == "input") {
        cfg.input = value;
        have_input = true;
      } else if (key == "directed") {
        cfg.directed = parse_bool(value, lineno);
      } else if (key == "weighted") {
        cfg.weighted = parse_bool(value, lineno);
      } else if (key == "n") {
        cfg.design.n = parse_number<Index>(value, lineno);
      } else if (key == "K" || key == "k") {
        cfg.design.K = parse_number<int>(value, lineno);
      } else if (key == "lambda") {
        cfg.design.lambda = parse_number<double>(value, lineno);
      } else if (key == "t") {
        cfg.design.t = parse_number<double>(value, lineno);
      } else if (key == "beta") {
        cfg.design.beta = parse_number<double>(value, lineno);
      } else if (key == "graphon") {
        cfg.graphon = parse_graphon_kind(value);
      } else if (key == "kmax") {
        cfg.kmax = parse_number<int>(value, lineno);
      } else if (key == "tau_grid") {
        cfg.tau_grid.clear();
        for (const auto& v : split_list(value)) cfg.tau_grid.push_back(parse_number<double>(v, lineno));
      } else if (key == "losses") {
        cfg.losses.clear();
        for (const auto& v : split_list(value)) cfg.losses.push_back(parse_loss(v));
      } else if (key == "p") {
        cfg.p_grid.clear();
        for (const auto& v : split_list(value)) cfg.p_grid.push_back(parse_number<double>(v, lineno));
      } else if (key == "n_splits") {
        cfg.n_splits_grid.clear();
        for (const auto& v : split_list(value)) cfg.n_splits_grid.push_back(parse_number<int>(v, lineno));
      } else if (key == "stability") {
        cfg.stability = parse_stability(value);
      } else if (key == "stability_reps") {
        cfg.stability_reps = parse_number<int>(value, lineno);
      } else if (key == "replications") {
        cfg.replications = parse_number<int>(value, lineno);
      } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(value, lineno);
      } else if (key == "output") {
        cfg.output = value;
      } else if (key == "summary") {
        cfg.summary = value;
      } else if (key == "threads") {
        cfg.threads = parse_number<int>(value, lineno);
      } else {
        throw ParseError(lineno, "unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ParameterError& e) {
      throw ParseError(lineno, e.what());
    }
    cfg.raw[key] = value;
  }
  if (have_input && !cfg.raw.count("generator")) cfg.generator = Generator::kFile;
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in);
}

void validate(ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) { throw ParameterError(what); };
  if (cfg.replications < 1) fail("replications must be at least 1");
  if (cfg.stability_reps < 1) fail("stability_reps must be at least 1");
  if (cfg.threads < 1) fail("threads must be at least 1");
  if (cfg.kmax < 1) fail("kmax must be at least 1");
  if (cfg.p_grid.empty()) fail("p grid is empty");
  for (double p : cfg.p_grid) {
    if (!(p > 0.0 && p < 1.0)) fail("every p must lie in (0, 1)");
  }
  if (cfg.n_splits_grid.empty()) fail("n_splits grid is empty");
  for (int n : cfg.n_splits_grid) {
    if (n < 1) fail("n_splits must be at least 1");
  }

  const bool from_file = cfg.generator == Generator::kFile;
  if (from_file && cfg.input.empty()) fail("generator 'file' needs an input path");
  if (!from_file) {
    const auto& d = cfg.design;
    if (d.n < 3) fail("n must be at least 3");
    if (d.K < 1 || d.K > d.n) fail("need 1 <= K <= n");
    if (!(d.lambda > 0.0)) fail("lambda must be positive");
    if (d.beta < 0.0 || d.beta > 1.0) fail("beta must lie in [0, 1]");
    if (d.t < 0.0) fail("t must be non-negative");
    cfg.directed = cfg.generator == Generator::kRDPG;
    cfg.weighted = false;
  }

  const bool undirected_task = cfg.task == Task::kSelectModel || cfg.task == Task::kSweepPN ||
                               cfg.task == Task::kTuneReg || cfg.task == Task::kTuneGraphon;
  if (undirected_task && cfg.directed) fail(std::string(task_name(cfg.task)) + " needs an undirected network");
  if ((cfg.task == Task::kTuneReg || cfg.task == Task::kTuneGraphon) && cfg.weighted) {
    fail(std::string(task_name(cfg.task)) + " needs a binary network");
  }
  if (cfg.task == Task::kConcentration && from_file) fail("CONCENTRATION needs a generator with known M");

  if (cfg.losses.empty()) {
    if (cfg.task == Task::kSelectModel || cfg.task == Task::kSweepPN) {
      cfg.losses = {LossKind::kL2, LossKind::kDeviance};
    } else if (cfg.task == Task::kSelectRank) {
      cfg.losses = {LossKind::kL2};
      if (!cfg.weighted) cfg.losses.push_back(LossKind::kAUC);
    }
  }
  for (auto l : cfg.losses) {
    if ((cfg.task == Task::kSelectModel || cfg.task == Task::kSweepPN) && l == LossKind::kAUC) {
      fail("model selection uses l2 or deviance loss");
    }
    if (cfg.weighted && l != LossKind::kL2) fail("only the l2 loss works for weighted networks");
  }
  if (cfg.tau_grid.empty()) {
    if (cfg.task == Task::kTuneReg) {
      for (int i = 1; i <= 20; ++i) cfg.tau_grid.push_back(i / 10.0);
    } else if (cfg.task == Task::kTuneGraphon) {
      cfg.tau_grid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
    }
  }
  for (double t : cfg.tau_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail("tau values must be finite and non-negative");
  }
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : cfg.raw) feed(k + "=" + v + "\n");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  validate(cfg);
  std::optional<Instance> file;
  if (cfg.generator == Generator::kFile) {
    file = Instance{load_edge_list(cfg.input, cfg.directed, cfg.weighted), std::nullopt, std::nullopt};
  }

  const int reps = cfg.replications;
  std::vector<std::optional<std::vector<ResultRow>>> slots(static_cast<std::size_t>(reps));
  std::vector<std::string> errors(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        slots[static_cast<std::size_t>(r)] = run_replication(cfg, file ? &*file : nullptr, r);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(r)] = e.what();
      }
    }
  };
  const int threads = std::min(cfg.threads, reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentOutput out;
  for (int r = 0; r < reps; ++r) {
    const auto rr = static_cast<std::size_t>(r);
    if (slots[rr]) {
      for (auto& row : *slots[rr]) out.rows.push_back(std::move(row));
    } else {
      ++out.failures;
      out.failure_messages.push_back("replication " + std::to_string(r) + ": " + errors[rr]);
      std::cerr << "replication " << r << " failed: " << errors[rr] << '\n';
    }
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_timing) {
  out << "rep,n,K_true,lambda,t,beta,model_true,p,N,method,family_hat,value_hat,correct,loss_best,quality,"
         "mean_losses";
  if (include_timing) out << ",ms";
  out << '\n';
  for (const auto& r : rows) {
    out << r.rep << ',' << r.n << ',' << (r.K_true ? std::to_string(*r.K_true) : "") << ','
        << opt_number(r.lambda) << ',' << opt_number(r.t) << ',' << opt_number(r.beta) << ',' << r.model_true
        << ',' << format_number(r.p) << ',' << r.N << ',' << r.method << ',' << r.family_hat << ','
        << opt_number(r.value_hat) << ',' << (r.correct ? (*r.correct ? "1" : "0") : "") << ','
        << opt_number(r.loss_best) << ',' << opt_number(r.quality) << ',';
    for (std::size_t q = 0; q < r.mean_losses.size(); ++q) {
      if (q) out << ';';
      out << r.mean_losses[q].first << ':' << format_number(r.mean_losses[q].second);
    }
    if (include_timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.ms);
      out << ',' << buf;
    }
    out << '\n';
  }
}

nlohmann::json summarize(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  using nlohmann::json;
  const bool sweep = cfg.p_grid.size() > 1 || cfg.n_splits_grid.size() > 1;
  struct Group {
    int rows = 0;
    int judged = 0;
    int correct = 0;
    std::vector<double> losses;
    std::vector<double> quality;
  };
  std::vector<std::string> order;
  std::map<std::string, Group> groups;
  for (const auto& r : out.rows) {
    std::string key = r.method;
    if (r.method == "fixed" && r.value_hat) key += " tau=" + format_number(*r.value_hat);
    if (sweep) key += " p=" + format_number(r.p) + " N=" + std::to_string(r.N);
    if (!groups.count(key)) order.push_back(key);
    auto& g = groups[key];
    ++g.rows;
    if (r.correct) {
      ++g.judged;
      g.correct += *r.correct ? 1 : 0;
    }
    if (r.loss_best) g.losses.push_back(*r.loss_best);
    if (r.quality) g.quality.push_back(*r.quality);
  }
  json methods = json::object();
  for (const auto& key : order) {
    const auto& g = groups[key];
    json m;
    m["rows"] = g.rows;
    m["fraction_correct"] = g.judged ? json(static_cast<double>(g.correct) / g.judged) : json(nullptr);
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    m["mean_loss_best"] = g.losses.empty() ? json(nullptr) : json(mean(g.losses));
    m["mean_quality"] = g.quality.empty() ? json(nullptr) : json(mean(g.quality));
    m["median_quality"] = g.quality.empty() ? json(nullptr) : json(median(g.quality));
    methods[key] = m;
  }
  json s;
  s["task"] = std::string(task_name(cfg.task));
  s["seed"] = cfg.seed;
  s["config_hash"] = config_hash(cfg);
  s["config"] = cfg.raw;
  s["replications"] = cfg.replications;
  s["failures"] = out.failures;
  s["failure_messages"] = out.failure_messages;
  s["methods"] = methods;
  return s;
}

ExperimentOutput run_experiment_to_files(const ExperimentConfig& cfg) {
  if (cfg.output.empty()) throw ParameterError("no output path configured");
  std::ofstream csv(cfg.output);
  if (!csv) throw Error("cannot write " + cfg.output);
  std::ofstream summary;
  if (!cfg.summary.empty()) {
    summary.open(cfg.summary);
    if (!summary) throw Error("cannot write " + cfg.summary);
  }
  auto out = run_experiment(cfg);
  write_csv(csv, out.rows);
  if (summary.is_open()) summary << summarize(cfg, out).dump(2) << '\n';
  return out;
}

}  // namespace ecv
