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

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdiscreen/bench_io.hpp"
#include "sdiscreen/csv.hpp"
#include "sdiscreen/screening.hpp"
#include "sdiscreen/stump.hpp"
#include "sdiscreen/synthetic.hpp"
#include "sdiscreen/thresholding.hpp"

namespace sdiscreen::cli {

constexpr const char* kSeedEnv = "SDISCREEN_SEED";

/// Seed from the environment when set and valid, otherwise `fallback`.
inline std::uint64_t default_seed(std::uint64_t fallback = 0) {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  return (end != nullptr && *end == '\0') ? v : fallback;
}

enum class Format { Json, Csv };

struct ScreenOptions {
  std::string input;
  std::string target;
  ResponseMode mode = ResponseMode::Regression;
  std::optional<std::size_t> top_k;
  // "permutation", "elbow" or "value:<gamma>"; empty for none.
  std::string threshold;
  int permutations = 10;
  std::uint64_t seed = 0;
  Format format = Format::Json;
  std::string output;
  bool with_sis = false;
  unsigned workers = 1;
};

struct VariableReport {
  std::string name;
  std::size_t rank = 0;  // 1-based
  double delta = 0.0;
  std::optional<double> split_value;
  double correlation = 0.0;
  bool selected = false;
  std::optional<double> sis_score;
};

struct ScreenReport {
  std::size_t n = 0;
  std::size_t p = 0;
  ResponseMode mode = ResponseMode::Regression;
  std::string target;
  std::size_t dropped_rows = 0;
  std::string rule = "none";
  std::optional<std::size_t> k;
  std::optional<double> gamma;
  std::optional<int> permutations;
  std::optional<std::uint64_t> seed;
  std::vector<VariableReport> variables;  // in rank order
};

/// Runs SDI screening on a CSV file. Throws InputError with a one-line
/// diagnostic on any bad input.
inline ScreenReport screen(const ScreenOptions& opt) {
  if (opt.input.empty()) throw InputError("screen requires --input");
  if (opt.target.empty()) throw InputError("screen requires --target");
  if (opt.top_k && !opt.threshold.empty()) {
    throw InputError("--top-k and --threshold are mutually exclusive");
  }
  const CsvTable table = read_csv_file(opt.input);
  IngestResult ingest = table_to_dataset(table, opt.target, opt.mode);
  const Dataset& d = ingest.data;
  if (!(plugin_variance(d.response) > 0.0)) throw InputError("zero response variance");

  const auto fits = fit_all_stumps(d, opt.workers);
  const Ranking ranking = rank_from_fits(fits);
  std::optional<Ranking> sis;
  if (opt.with_sis) sis = rank_sis(d, opt.workers);

  ScreenReport rep;
  rep.n = d.n();
  rep.p = d.p();
  rep.mode = d.mode;
  rep.target = table.header[resolve_target(table, opt.target)];
  rep.dropped_rows = ingest.dropped_rows;

  SupportSet selected;
  if (opt.top_k) {
    if (*opt.top_k < 1 || *opt.top_k > d.p()) {
      throw InputError("--top-k must lie in [1, " + std::to_string(d.p()) + "]");
    }
    selected = top_k(ranking, *opt.top_k);
    rep.rule = "top-k";
    rep.k = *opt.top_k;
  } else if (!opt.threshold.empty()) {
    ThresholdDecision dec;
    if (opt.threshold == "permutation") {
      if (opt.permutations < 1) throw InputError("--permutations must be at least 1");
      dec = permutation_threshold(d, opt.permutations, opt.seed, opt.workers, &ranking);
      rep.permutations = opt.permutations;
      rep.seed = opt.seed;
    } else if (opt.threshold == "elbow") {
      try {
        dec = elbow_threshold(ranking.scores, opt.seed);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      rep.seed = opt.seed;
    } else if (opt.threshold.rfind("value:", 0) == 0) {
      const std::string text = opt.threshold.substr(6);
      std::optional<double> gamma;
      try {
        gamma = parse_cell(text, 0, "--threshold");
      } catch (const InputError&) {
      }
      if (!gamma) throw InputError("--threshold value:<gamma> needs a number, got '" + text + "'");
      dec = fixed_threshold(ranking.scores, *gamma);
    } else {
      throw InputError("unknown --threshold '" + opt.threshold +
                       "' (expected permutation, elbow or value:<gamma>)");
    }
    selected = dec.selected;
    rep.rule = to_string(dec.method);
    rep.gamma = dec.gamma;
  }

  for (std::size_t k = 0; k < ranking.size(); ++k) {
    const std::size_t j = ranking.order[k];
    VariableReport v;
    v.name = d.names[j];
    v.rank = k + 1;
    v.delta = fits[j].delta;
    if (!fits[j].degenerate) v.split_value = fits[j].split_value;
    v.correlation = stump_correlation(fits[j], d.column(j), d.response);
    v.selected = selected.contains(j);
    if (sis) v.sis_score = sis->scores[j];
    rep.variables.push_back(std::move(v));
  }
  return rep;
}

inline nlohmann::json report_to_json(const ScreenReport& rep) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : rep.variables) {
    nlohmann::json o = {{"name", v.name},       {"rank", v.rank},
                        {"delta", v.delta},     {"split_value", nullptr},
                        {"correlation", v.correlation}, {"selected", v.selected}};
    if (v.split_value) o["split_value"] = *v.split_value;
    if (v.sis_score) o["sis_score"] = *v.sis_score;
    vars.push_back(std::move(o));
  }
  nlohmann::json sel = {{"rule", rep.rule}};
  if (rep.k) sel["k"] = *rep.k;
  if (rep.gamma) sel["gamma"] = *rep.gamma;
  if (rep.permutations) sel["permutations"] = *rep.permutations;
  if (rep.seed) sel["seed"] = *rep.seed;
  return {{"method", "SDI"},
          {"mode", rep.mode == ResponseMode::Regression ? "regression" : "classification"},
          {"target", rep.target},
          {"n", rep.n},
          {"p", rep.p},
          {"rows_dropped", rep.dropped_rows},
          {"selection", sel},
          {"variables", vars}};
}

inline std::string report_to_csv(const ScreenReport& rep) {
  std::ostringstream out;
  const bool sis = !rep.variables.empty() && rep.variables.front().sis_score.has_value();
  out << "name,rank,delta,split_value,correlation,selected";
  if (rep.gamma) out << ",gamma";
  if (sis) out << ",sis_score";
  out << '\n';
  for (const auto& v : rep.variables) {
    out << v.name << ',' << v.rank << ',' << format_double(v.delta) << ','
        << (v.split_value ? format_double(*v.split_value) : "") << ','
        << format_double(v.correlation) << ',' << (v.selected ? 1 : 0);
    if (rep.gamma) out << ',' << format_double(*rep.gamma);
    if (sis) out << ',' << format_double(*v.sis_score);
    out << '\n';
  }
  return out.str();
}

inline void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

/// `screen` subcommand. Returns the process exit status.
inline int cmd_screen(const ScreenOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const ScreenReport rep = screen(opt);
    if (rep.dropped_rows > 0) {
      err << "warning: dropped " << rep.dropped_rows << " row(s) with missing values\n";
    }
    const std::string text =
        opt.format == Format::Json ? report_to_json(rep).dump(2) + "\n" : report_to_csv(rep);
    emit(text, opt.output, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

struct SimulateOptions {
  std::string model = "model1";
  std::string component;
  std::size_t n = 1000;
  std::size_t p = 200;
  std::size_t s = 4;
  double rho = 0.0;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  std::string output;
};

inline ModelSpec spec_from_options(const SimulateOptions& opt) {
  ModelSpec spec;
  if (opt.model == "model1") {
    spec.family = ModelFamily::Model1;
  } else if (opt.model == "model2") {
    spec.family = ModelFamily::Model2;
  } else {
    throw InputError("unknown --model '" + opt.model + "' (expected model1 or model2)");
  }
  if (opt.component.empty()) {
    if (spec.family == ModelFamily::Model2) throw InputError("model2 requires --component square|cosine");
    spec.component = Component::Linear;
  } else if (opt.component == "linear") {
    spec.component = Component::Linear;
  } else if (opt.component == "square") {
    spec.component = Component::Square;
  } else if (opt.component == "cosine") {
    spec.component = Component::Cosine;
  } else {
    throw InputError("unknown --component '" + opt.component + "'");
  }
  spec.n = opt.n;
  spec.p = opt.p;
  spec.s = opt.s;
  spec.rho = opt.rho;
  spec.sigma = opt.sigma;
  spec.seed = opt.seed;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return spec;
}

/// Sidecar metadata written next to a simulated dataset.
inline nlohmann::json simulation_metadata(const ModelSpec& spec, const LabeledDataset& sample) {
  nlohmann::json truth_names = nlohmann::json::array();
  for (std::size_t j : sample.truth.indices) truth_names.push_back(sample.data.names[j]);
  return {{"spec",
           {{"family", to_string(spec.family)},
            {"component", to_string(spec.component)},
            {"model", spec.label()},
            {"n", spec.n},
            {"p", spec.p},
            {"s", spec.s},
            {"rho", spec.rho},
            {"sigma", spec.sigma}}},
          {"seed", spec.seed},
          {"truth", truth_names},
          {"truth_indices", sample.truth.indices},
          {"population_signal", sample.population_signal},
          {"population_signal_approximate", sample.signal_approximate},
          {"response_column", "y"}};
}

/// `simulate` subcommand: writes <output> (CSV) and <output>.json.
inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.output.empty()) throw InputError("simulate requires --output");
    const ModelSpec spec = spec_from_options(opt);
    const LabeledDataset sample = generate(spec);
    write_file_atomic(opt.output, dataset_to_csv(sample.data));
    write_file_atomic(opt.output + ".json", simulation_metadata(spec, sample).dump(2) + "\n");
    out << "wrote " << spec.label() << " n=" << spec.n << " p=" << spec.p << " s=" << spec.s
        << " to " << opt.output << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

struct BenchOptions {
  std::string config;
  std::string output_dir;
  std::optional<unsigned> workers;
};

/// `bench` subcommand: writes results.csv and results.json into output_dir.
inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.config.empty()) throw InputError("bench requires --config");
    if (opt.output_dir.empty()) throw InputError("bench requires --output-dir");
    std::ifstream in(opt.config);
    if (!in) throw InputError("cannot open config file '" + opt.config + "'");
    nlohmann::json root;
    try {
      root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
    BenchSpec bench = parse_bench_config(root);
    if (opt.workers) bench.config.workers = *opt.workers;
    const RecoveryResult result = run_bench(bench);

    std::filesystem::create_directories(opt.output_dir);
    const std::filesystem::path dir(opt.output_dir);
    write_file_atomic(dir / "results.csv", results_to_csv(result));
    write_file_atomic(dir / "results.json", results_to_json(result).dump(2) + "\n");
    for (const auto& row : result.rows) {
      out << row.spec.label() << " n=" << row.spec.n << " p=" << row.spec.p << " s=" << row.spec.s
          << ' ' << row.method;
      detail::for_each_metric(row, [&](const char* metric, double value) {
        out << ' ' << metric << '=' << format_double(value);
      });
      out << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sdiscreen::cli
