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

#include "ecv/selection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "ecv/blockmodel.hpp"
#include "ecv/graphon.hpp"
#include "ecv/metrics.hpp"

namespace ecv {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_config(const EcvConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) {
    throw ParameterError("ECV needs 0 < p < 1 so that some pairs are held out");
  }
  if (cfg.n_splits < 1) throw ParameterError("need at least one split");
}

std::uint64_t split_seed(const EcvConfig& cfg, int m) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(m));
}

std::vector<double> held_out_truths(const AdjacencyMatrix& a, const HoldoutMask& mask) {
  const auto pairs = mask.held_out_pairs();
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.push_back(a.weight(i, j));
  return out;
}

double evaluate(LossKind loss, std::span<const double> truths, std::span<const double> preds) {
  switch (loss) {
    case LossKind::kL2:
      return sse_loss(truths, preds);
    case LossKind::kDeviance:
      return deviance_loss(truths, preds);
    case LossKind::kAUC:
      return 1.0 - auc(truths, preds);
  }
  return kMissing;
}

// Column r holds the rank-(r+1) reconstruction at every held-out pair.
DenseMatrix prefix_predictions(const CompletedMatrix& ahat, std::span<const NodePair> pairs) {
  const Index r = ahat.rank();
  DenseMatrix out(static_cast<Index>(pairs.size()), r);
  const auto& u = ahat.U();
  const auto& v = ahat.V();
  const auto& s = ahat.sigma();
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [i, j] = pairs[q];
    double acc = 0.0;
    for (Index k = 0; k < r; ++k) {
      acc += u(i, k) * s(k) * v(j, k);
      out(static_cast<Index>(q), k) = acc;
    }
  }
  return out;
}

std::vector<double> column(const DenseMatrix& m, Index c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

SelectionResult empty_result(std::vector<CandidateId> candidates, int n_splits) {
  SelectionResult r;
  r.losses = DenseMatrix::Constant(n_splits, static_cast<Index>(candidates.size()), kMissing);
  r.candidates = std::move(candidates);
  return r;
}

std::vector<double> dedupe_grid(std::span<const double> grid) {
  if (grid.empty()) throw ParameterError("tuning grid is empty");
  std::vector<double> out(grid.begin(), grid.end());
  for (double t : out) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("grid values must be finite and non-negative");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_kmax(const AdjacencyMatrix& a, int kmax) {
  if (kmax < 1) throw ParameterError("kmax must be at least 1");
  if (kmax > a.n()) throw ParameterError("kmax cannot exceed the number of nodes");
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kSBM:
      return "SBM";
    case Family::kDCSBM:
      return "DCSBM";
    case Family::kRank:
      return "RANK";
    case Family::kTauReg:
      return "TAU_REG";
    case Family::kTauGraphon:
      return "TAU_GRAPHON";
  }
  return "?";
}

CandidateId sbm(int k) { return {Family::kSBM, static_cast<double>(k)}; }
CandidateId dcsbm(int k) { return {Family::kDCSBM, static_cast<double>(k)}; }
CandidateId rank_candidate(int k) { return {Family::kRank, static_cast<double>(k)}; }

std::string to_string(const CandidateId& c) {
  switch (c.family) {
    case Family::kSBM:
      return "SBM-" + std::to_string(c.K());
    case Family::kDCSBM:
      return "DCSBM-" + std::to_string(c.K());
    case Family::kRank:
      return "K=" + std::to_string(c.K());
    case Family::kTauReg:
    case Family::kTauGraphon:
      return "tau=" + format_real(c.value);
  }
  return "?";
}

bool simpler(const CandidateId& a, const CandidateId& b) {
  if (a.value != b.value) return a.value < b.value;
  return static_cast<int>(a.family) < static_cast<int>(b.family);
}

LossKind parse_loss(std::string_view name) {
  if (name == "l2" || name == "sse" || name == "L2" || name == "SSE") return LossKind::kL2;
  if (name == "deviance" || name == "dev") return LossKind::kDeviance;
  if (name == "auc" || name == "AUC") return LossKind::kAUC;
  throw ParameterError("unknown loss '" + std::string(name) + "'");
}

std::string_view loss_name(LossKind loss) {
  switch (loss) {
    case LossKind::kL2:
      return "l2";
    case LossKind::kDeviance:
      return "deviance";
    case LossKind::kAUC:
      return "auc";
  }
  return "?";
}

double SelectionResult::chosen_loss() const {
  for (std::size_t q = 0; q < candidates.size(); ++q) {
    if (candidates[q] == chosen) return mean_loss[q];
  }
  return kMissing;
}

void finalize(SelectionResult& r) {
  const Index q_count = r.losses.cols();
  r.mean_loss.assign(static_cast<std::size_t>(q_count), kMissing);
  int best = -1;
  for (Index q = 0; q < q_count; ++q) {
    double sum = 0.0;
    int seen = 0;
    for (Index m = 0; m < r.losses.rows(); ++m) {
      const double v = r.losses(m, q);
      if (std::isnan(v)) continue;
      sum += v;
      ++seen;
    }
    if (seen == 0) continue;
    const double mean = sum / seen;
    r.mean_loss[static_cast<std::size_t>(q)] = mean;
    if (best < 0) {
      best = static_cast<int>(q);
      continue;
    }
    const auto b = static_cast<std::size_t>(best);
    const auto c = static_cast<std::size_t>(q);
    if (mean < r.mean_loss[b] ||
        (mean == r.mean_loss[b] && simpler(r.candidates[c], r.candidates[b]))) {
      best = static_cast<int>(q);
    }
  }
  if (best < 0) throw Error("every candidate failed in every split");
  r.chosen = r.candidates[static_cast<std::size_t>(best)];
}

SelectionResult ecv_generic(const AdjacencyMatrix& a, std::span<const CandidateId> candidates,
                            const RankFn& rank_of, const PredictFn& predict, LossKind loss,
                            const EcvConfig& cfg) {
  check_config(cfg);
  if (candidates.empty()) throw ParameterError("candidate menu is empty");
  std::vector<Index> ranks;
  for (const auto& c : candidates) {
    const Index r = rank_of(c);
    if (r < 1 || r > a.n()) throw ParameterError("completion rank out of range for " + to_string(c));
    ranks.push_back(r);
  }
  const Index rmax = *std::max_element(ranks.begin(), ranks.end());
  auto result = empty_result({candidates.begin(), candidates.end()}, cfg.n_splits);

  for (int m = 0; m < cfg.n_splits; ++m) {
    const auto seed = split_seed(cfg, m);
    Rng rng(seed);
    const auto mask = sample_mask(a.n(), cfg.p, a.directed(), rng);
    const auto ahat = complete(a, mask, rmax, rng, cfg.svd);
    const auto truths = held_out_truths(a, mask);
    for (std::size_t q = 0; q < candidates.size(); ++q) {
      Rng crng(derive_seed(seed, q));
      try {
        const auto preds = predict(ahat.truncated(ranks[q]), mask, candidates[q], crng);
        if (preds.size() != truths.size()) continue;
        result.losses(m, static_cast<Index>(q)) = evaluate(loss, truths, preds);
      } catch (const std::exception&) {
        // recorded as missing
      }
    }
  }
  finalize(result);
  return result;
}

std::vector<SelectionResult> select_block_model(const AdjacencyMatrix& a, int kmax,
                                                std::span<const LossKind> losses,
                                                const EcvConfig& cfg) {
  check_config(cfg);
  if (a.directed()) throw ParameterError("block model selection needs an undirected network");
  check_kmax(a, kmax);
  if (losses.empty()) throw ParameterError("no loss requested");
  for (auto l : losses) {
    if (l == LossKind::kAUC) throw ParameterError("block model selection uses l2 or deviance loss");
  }
  std::vector<CandidateId> cands;
  for (int k = 1; k <= kmax; ++k) {
    cands.push_back(sbm(k));
    cands.push_back(dcsbm(k));
  }
  std::vector<SelectionResult> results;
  for (std::size_t l = 0; l < losses.size(); ++l) results.push_back(empty_result(cands, cfg.n_splits));

  for (int m = 0; m < cfg.n_splits; ++m) {
    const auto seed = split_seed(cfg, m);
    Rng rng(seed);
    const auto mask = sample_mask(a.n(), cfg.p, false, rng);
    const auto ahat = complete(a, mask, kmax, rng, cfg.svd);
    const auto pairs = mask.held_out_pairs();
    const auto truths = held_out_truths(a, mask);
    std::vector<double> preds(pairs.size());
    for (int k = 1; k <= kmax; ++k) {
      const auto trunc = ahat.truncated(k);
      for (int kind = 0; kind < 2; ++kind) {
        const auto q = static_cast<std::size_t>(2 * (k - 1) + kind);
        Rng crng(derive_seed(seed, q));
        FittedBlockModel model;
        try {
          if (kind == 0) {
            model = estimate_sbm(a, mask, spectral_clustering(trunc, k, crng, cfg.kmeans));
          } else {
            model = estimate_dcsbm(a, mask, spherical_spectral_clustering(trunc, k, crng, cfg.kmeans));
          }
        } catch (const std::exception&) {
          continue;
        }
        for (std::size_t t = 0; t < pairs.size(); ++t) {
          preds[t] = model.probability(pairs[t].first, pairs[t].second);
        }
        for (std::size_t l = 0; l < losses.size(); ++l) {
          try {
            results[l].losses(m, static_cast<Index>(q)) = evaluate(losses[l], truths, preds);
          } catch (const std::exception&) {
          }
        }
      }
    }
  }
  for (auto& r : results) finalize(r);
  return results;
}

SelectionResult select_block_model(const AdjacencyMatrix& a, int kmax, LossKind loss,
                                   const EcvConfig& cfg) {
  const LossKind one[] = {loss};
  return std::move(select_block_model(a, kmax, one, cfg).front());
}

std::vector<SelectionResult> select_rank(const AdjacencyMatrix& a, int kmax,
                                         std::span<const LossKind> losses,
                                         const EcvConfig& cfg) {
  check_config(cfg);
  check_kmax(a, kmax);
  if (losses.empty()) throw ParameterError("no loss requested");
  for (auto l : losses) {
    if (l == LossKind::kAUC && a.weighted()) throw ParameterError("AUC needs a binary network");
    if (l == LossKind::kDeviance && a.weighted()) throw ParameterError("deviance needs a binary network");
  }
  std::vector<CandidateId> cands;
  for (int k = 1; k <= kmax; ++k) cands.push_back(rank_candidate(k));
  std::vector<SelectionResult> results;
  for (std::size_t l = 0; l < losses.size(); ++l) results.push_back(empty_result(cands, cfg.n_splits));

  for (int m = 0; m < cfg.n_splits; ++m) {
    Rng rng(split_seed(cfg, m));
    const auto mask = sample_mask(a.n(), cfg.p, a.directed(), rng);
    const auto ahat = complete(a, mask, kmax, rng, cfg.svd);
    const auto truths = held_out_truths(a, mask);
    const auto preds = prefix_predictions(ahat, mask.held_out_pairs());
    for (int k = 1; k <= kmax; ++k) {
      const auto col = column(preds, k - 1);
      for (std::size_t l = 0; l < losses.size(); ++l) {
        try {
          results[l].losses(m, k - 1) = evaluate(losses[l], truths, col);
        } catch (const std::exception&) {
        }
      }
    }
  }
  for (auto& r : results) finalize(r);
  return results;
}

SelectionResult select_rank(const AdjacencyMatrix& a, int kmax, LossKind loss,
                            const EcvConfig& cfg) {
  const LossKind one[] = {loss};
  return std::move(select_rank(a, kmax, one, cfg).front());
}

CommunityAssignment regularized_spectral_clustering(const DenseMatrix& w, double tau, int k,
                                                    Rng& rng, const KMeansOptions& opts) {
  return spectral_clustering(normalized_laplacian(regularize(w, tau)), k, rng, opts);
}

const CommunityAssignment& RegularizationTuning::chosen_labels() const {
  for (std::size_t q = 0; q < selection.candidates.size(); ++q) {
    if (selection.candidates[q] == selection.chosen) return full_labels[q];
  }
  throw Error("chosen candidate missing from the menu");
}

RegularizationTuning tune_regularization(const AdjacencyMatrix& a,
                                         std::span<const double> tau_grid, int k,
                                         const EcvConfig& cfg) {
  check_config(cfg);
  if (a.directed() || a.weighted()) {
    throw ParameterError("regularization tuning needs an undirected binary network");
  }
  check_kmax(a, k);
  const auto grid = dedupe_grid(tau_grid);
  std::vector<CandidateId> cands;
  for (double t : grid) cands.push_back({Family::kTauReg, t});

  RegularizationTuning out;
  const DenseMatrix full = a.dense();
  const auto full_seed = derive_seed(cfg.seed, 0xF0F0F0F0ULL);
  for (std::size_t q = 0; q < grid.size(); ++q) {
    Rng rng(derive_seed(full_seed, q));
    out.full_labels.push_back(regularized_spectral_clustering(full, grid[q], k, rng, cfg.kmeans));
  }

  out.selection = empty_result(cands, cfg.n_splits);
  for (int m = 0; m < cfg.n_splits; ++m) {
    const auto seed = split_seed(cfg, m);
    Rng rng(seed);
    const auto mask = sample_mask(a.n(), cfg.p, false, rng);
    const DenseMatrix d = complete(a, mask, k, rng, cfg.svd).dense();
    const DenseMatrix w = (0.5 * (d + d.transpose())).cwiseMax(0.0);
    for (std::size_t q = 0; q < grid.size(); ++q) {
      Rng crng(derive_seed(seed, q));
      try {
        const auto labels = regularized_spectral_clustering(w, grid[q], k, crng, cfg.kmeans);
        out.selection.losses(m, static_cast<Index>(q)) =
            ccd(labels, out.full_labels[q], mask.held_out_pairs());
      } catch (const std::exception&) {
      }
    }
  }
  finalize(out.selection);
  return out;
}

SelectionResult tune_graphon(const AdjacencyMatrix& a, std::span<const double> tau_grid,
                             int kmax, const EcvConfig& cfg) {
  check_config(cfg);
  if (a.directed() || a.weighted()) {
    throw ParameterError("graphon tuning needs an undirected binary network");
  }
  check_kmax(a, kmax);
  const auto grid = dedupe_grid(tau_grid);
  std::vector<CandidateId> cands;
  for (double t : grid) cands.push_back({Family::kTauGraphon, t});
  auto result = empty_result(cands, cfg.n_splits);

  for (int m = 0; m < cfg.n_splits; ++m) {
    Rng rng(split_seed(cfg, m));
    const auto mask = sample_mask(a.n(), cfg.p, false, rng);
    const auto ahat = complete(a, mask, kmax, rng, cfg.svd);
    const auto pairs = mask.held_out_pairs();
    const auto truths = held_out_truths(a, mask);

    const auto prefix = prefix_predictions(ahat, pairs);
    Index best_k = 1;
    double best = std::numeric_limits<double>::infinity();
    for (Index k = 1; k <= kmax; ++k) {
      const double l = sse_loss(truths, column(prefix, k - 1));
      if (l < best) {
        best = l;
        best_k = k;
      }
    }
    const DenseMatrix d = ahat.truncated(best_k).dense();
    const NeighborhoodSmoother smoother((0.5 * (d + d.transpose())).cwiseMax(0.0).cwiseMin(1.0));

    std::vector<double> preds(pairs.size());
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const double h = smoothing_bandwidth(grid[q], a.n());
      if (!(h > 0.0 && h < 1.0)) continue;
      const DenseMatrix p = smoother.smooth({h, true});
      for (std::size_t t = 0; t < pairs.size(); ++t) preds[t] = p(pairs[t].first, pairs[t].second);
      result.losses(m, static_cast<Index>(q)) = sse_loss(truths, preds);
    }
  }
  finalize(result);
  return result;
}

CandidateId stability_select(std::span<const CandidateId> choices, StabilityMode mode) {
  if (choices.empty()) throw ParameterError("no choices to aggregate");
  if (mode == StabilityMode::kMostFrequent) {
    std::vector<std::pair<CandidateId, int>> counts;
    for (const auto& c : choices) {
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& e) { return e.first == c; });
      if (it == counts.end()) {
        counts.emplace_back(c, 1);
      } else {
        ++it->second;
      }
    }
    auto best = counts.front();
    for (const auto& e : counts) {
      if (e.second > best.second || (e.second == best.second && simpler(e.first, best.first))) best = e;
    }
    return best.first;
  }
  const Family fam = choices.front().family;
  double sum = 0.0;
  for (const auto& c : choices) {
    if (c.family != fam) throw ParameterError("cannot average choices from different families");
    sum += c.value;
  }
  const double mean = sum / static_cast<double>(choices.size());
  CandidateId out{fam, mean};
  if (out.integral()) out.value = std::floor(mean + 0.5);
  return out;
}

SelectionResult repeat_selection(const std::function<SelectionResult(std::uint64_t)>& select,
                                 int reps, std::uint64_t seed) {
  if (reps < 1) throw ParameterError("need at least one repetition");
  SelectionResult first;
  std::vector<CandidateId> choices;
  for (int r = 0; r < reps; ++r) {
    auto res = select(r == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(r)));
    choices.push_back(res.chosen);
    if (r == 0) first = std::move(res);
  }
  first.per_rep_choices = std::move(choices);
  return first;
}

}  // namespace ecv
