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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecv/selection.hpp"
#include "ecv/simgen.hpp"

namespace ecv {

enum class Task { kSelectModel, kSelectRank, kTuneReg, kTuneGraphon, kSweepPN, kConcentration };
enum class Generator { kSBM, kDCSBM, kRDPG, kGraphon, kFile };
enum class Stability { kNone, kMode, kAvg, kBoth };

Task parse_task(std::string_view s);
std::string_view task_name(Task t);
Generator parse_generator(std::string_view s);
Stability parse_stability(std::string_view s);
std::string_view stability_name(Stability s);

/// One experiment, read from a flat "key = value" file. Lists are comma
/// separated. Keys left out keep the defaults below.
struct ExperimentConfig {
  Task task = Task::kSelectModel;
  Generator generator = Generator::kDCSBM;
  std::string input;
  bool directed = false;
  bool weighted = false;
  BlockDesign design;
  GraphonKind graphon = GraphonKind::kPiecewiseK3;
  int kmax = 6;
  std::vector<double> tau_grid;
  std::vector<LossKind> losses;
  std::vector<double> p_grid{0.9};
  std::vector<int> n_splits_grid{3};
  Stability stability = Stability::kNone;
  int stability_reps = 20;
  int replications = 50;
  std::uint64_t seed = 1;
  std::string output;
  std::string summary;
  int threads = 1;
  /// Raw key/value pairs as read, for the summary echo and hash.
  std::map<std::string, std::string> raw;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fills task-dependent defaults (losses, grids) and checks every field.
void validate(ExperimentConfig& cfg);

/// FNV-1a over the sorted "key=value" lines of the raw config.
std::string config_hash(const ExperimentConfig& cfg);

struct ResultRow {
  int rep = 0;
  Index n = 0;
  std::optional<int> K_true;
  std::optional<double> lambda;
  std::optional<double> t;
  std::optional<double> beta;
  std::string model_true;
  double p = 0.0;
  int N = 0;
  std::string method;
  std::string family_hat;
  std::optional<double> value_hat;
  std::optional<bool> correct;
  std::optional<double> loss_best;
  /// Task-specific score: clustering accuracy, relative error or
  /// concentration ratio.
  std::optional<double> quality;
  std::vector<std::pair<std::string, double>> mean_losses;
  double ms = 0.0;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  int failures = 0;
  std::vector<std::string> failure_messages;
};

/// Runs every replication. Rows come back in replication order whatever
/// the worker count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Header plus one line per row. The timing column is last so it can be
/// dropped with include_timing = false.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_timing = true);

nlohmann::json summarize(const ExperimentConfig& cfg, const ExperimentOutput& out);

/// Opens both outputs first, then runs and writes.
ExperimentOutput run_experiment_to_files(const ExperimentConfig& cfg);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace ecv
