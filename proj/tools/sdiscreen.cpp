// Copyright 2026 The sdiscreen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdiscreen/cli.hpp"

int main(int argc, char** argv) {
  using namespace sdiscreen;
  CLI::App app{"sdiscreen: variable screening by single-level decrease in impurity"};
  app.require_subcommand(1);

  const std::uint64_t env_seed = cli::default_seed(0);
  const std::string seed_help =
      std::string("RNG seed (default: $") + cli::kSeedEnv + " if set, else 0)";

  cli::ScreenOptions screen;
  screen.seed = env_seed;
  std::string mode = "regression";
  std::string format = "json";
  std::size_t top_k = 0;
  auto* sc = app.add_subcommand("screen", "Rank the predictors of a CSV file");
  sc->add_option("--input", screen.input, "CSV file with a header row")->required();
  sc->add_option("--target", screen.target, "Response column (name or 0-based index)")->required();
  auto* k_opt = sc->add_option("--top-k", top_k, "Select the K best variables");
  auto* t_opt = sc->add_option("--threshold", screen.threshold,
                               "Data-driven selection: permutation | elbow | value:<gamma>");
  k_opt->excludes(t_opt);
  sc->add_option("--permutations", screen.permutations, "Permutations for the permutation rule")
      ->default_val(10);
  sc->add_option("--mode", mode, "regression | classification (0/1 target)")
      ->check(CLI::IsMember({"regression", "classification"}))
      ->default_val("regression");
  sc->add_option("--seed", screen.seed, seed_help);
  sc->add_option("--format", format, "Report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->default_val("json");
  sc->add_option("--output", screen.output, "Report path (default: stdout)");
  sc->add_flag("--with-sis", screen.with_sis, "Also report absolute marginal correlations");
  sc->add_option("--workers", screen.workers, "Worker threads, 0 = all cores")->default_val(1);

  cli::SimulateOptions sim;
  sim.seed = env_seed;
  auto* sm = app.add_subcommand("simulate", "Generate a benchmark dataset");
  sm->add_option("--model", sim.model, "model1 | model2")->required();
  sm->add_option("--component", sim.component,
                 "linear (model1) | square | cosine (model2)");
  sm->add_option("--n", sim.n, "Samples")->default_val(1000);
  sm->add_option("--p", sim.p, "Predictors")->default_val(200);
  sm->add_option("--s", sim.s, "Relevant predictors X1..Xs")->default_val(4);
  sm->add_option("--rho", sim.rho, "Equicorrelation for model1, in [0, 1)")->default_val(0.0);
  sm->add_option("--sigma", sim.sigma, "Noise standard deviation")->default_val(0.1);
  sm->add_option("--seed", sim.seed, seed_help);
  sm->add_option("--output", sim.output, "CSV path; metadata goes to <output>.json")->required();

  cli::BenchOptions bench;
  unsigned workers = 0;
  auto* bm = app.add_subcommand("bench", "Run a Monte-Carlo experiment from a JSON config");
  bm->add_option("--config", bench.config, "Experiment JSON")->required();
  bm->add_option("--output-dir", bench.output_dir, "Directory for results.csv/results.json")
      ->required();
  auto* w_opt = bm->add_option("--workers", workers, "Override worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  if (sc->parsed()) {
    if (k_opt->count() > 0) screen.top_k = top_k;
    screen.mode = mode == "classification" ? ResponseMode::BinaryClassification
                                           : ResponseMode::Regression;
    screen.format = format == "csv" ? cli::Format::Csv : cli::Format::Json;
    return cli::cmd_screen(screen, std::cout, std::cerr);
  }
  if (sm->parsed()) return cli::cmd_simulate(sim, std::cout, std::cerr);
  if (w_opt->count() > 0) bench.workers = workers;
  return cli::cmd_bench(bench, std::cout, std::cerr);
}
