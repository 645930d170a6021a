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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecv/selection.hpp"
#include "ecv/simgen.hpp"

using namespace ecv;

namespace {

const std::string kCli = ECV_CLI_PATH;

int run(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = kCli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in("cli_stdout.txt");
    std::stringstream s;
    s << in.rdbuf();
    *output = s.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("") != 0);
  CHECK(run("select-model --bogus") != 0);
  CHECK(run("select-model --gen sbm --format xml") != 0);
  CHECK(run("select-rank --gen rdpg --loss hinge") != 0);
  CHECK(run("select-model") != 0);
  CHECK(run("select-model --input does-not-exist.txt") != 0);
  CHECK(run("simulate --config does-not-exist.cfg") != 0);
  CHECK(run("--help") == 0);
}

TEST_CASE("completion refuses p = 1 unless asked") {
  REQUIRE(run("generate --gen sbm --n 40 --k 2 --lambda 6 --out cli_small.txt") == 0);
  CHECK(run("complete --input cli_small.txt --rank 2 --p 1") == 2);
  CHECK(run("complete --input cli_small.txt --rank 2 --p 1 --allow-full --out cli_full.txt") == 0);
  std::ifstream in("cli_full.txt");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 40);
  CHECK(run("complete --input cli_small.txt --rank 2 --p 0.9 --factors cli_fac") == 0);
  CHECK_FALSE(slurp("cli_fac.sigma.txt").empty());
}

TEST_CASE("rank selection on a generated file matches the library call") {
  REQUIRE(run("generate --gen rdpg --n 200 --k 2 --gen-seed 3 --out cli_rdpg.txt") == 0);
  std::string out;
  REQUIRE(run("select-rank --input cli_rdpg.txt --directed --kmax 4 --loss auc --seed 7 --out cli_rank.csv", &out) == 0);

  Rng rng(3);
  const auto inst = gen_rdpg_directed(200, 2, rng);
  EcvConfig cfg;
  cfg.seed = 7;
  const auto lib = select_rank(inst.A, 4, LossKind::kAUC, cfg);
  CHECK(out.find("chosen: " + to_string(lib.chosen)) != std::string::npos);

  const auto csv = slurp("cli_rank.csv");
  CHECK(csv.rfind("candidate,family,value,chosen,mean_loss,split_0,split_1,split_2\n", 0) == 0);
}

TEST_CASE("model selection with stability prints both aggregates") {
  std::string out;
  REQUIRE(run("select-model --gen sbm --n 150 --k 2 --lambda 20 --kmax 3 --stability both "
              "--stability-reps 3 --format json --out cli_model.json", &out) == 0);
  CHECK(out.find("chosen: ") != std::string::npos);
  CHECK(out.find("mode: ") != std::string::npos);
  CHECK(out.find("avg: ") != std::string::npos);
  CHECK(slurp("cli_model.json").find("\"per_rep_choices\"") != std::string::npos);
}

TEST_CASE("tuning subcommands run") {
  CHECK(run("tune-reg --gen dcsbm --n 120 --k 2 --lambda 8 --tau-grid 0.2,1.0") == 0);
  CHECK(run("tune-graphon --gen graphon --n 100 --tau-grid 0.5,1 --kmax 4") == 0);
}

TEST_CASE("simulate writes one row per replication") {
  {
    std::ofstream cfg("cli_sim.cfg");
    cfg << "task = select_rank\ngenerator = rdpg\nn = 100\nK = 2\nkmax = 3\nlosses = l2\nreplications = 3\n";
  }
  REQUIRE(run("simulate --config cli_sim.cfg --out cli_sim.csv --summary cli_sim.json") == 0);
  std::ifstream in("cli_sim.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  CHECK(slurp("cli_sim.json").find("\"config_hash\"") != std::string::npos);
}
