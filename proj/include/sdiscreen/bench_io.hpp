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
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdiscreen/csv.hpp"
#include "sdiscreen/experiments.hpp"
#include "sdiscreen/synthetic.hpp"

namespace sdiscreen {

enum class ExperimentKind { PartialRecovery, ExactRecovery, ThresholdStudy, Agreement };

struct BenchSpec {
  ExperimentKind kind = ExperimentKind::ExactRecovery;
  ExperimentConfig config;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  throw InputError("config field '" + field + "': " + what);
}

template <class T>
T get_number(const nlohmann::json& node, const std::string& field) {
  if (!node.is_number()) config_error(field, "expected a number");
  if constexpr (std::is_integral_v<T>) {
    if (!node.is_number_integer()) config_error(field, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (node.is_number_integer() && !node.is_number_unsigned() && node.get<std::int64_t>() < 0) {
        config_error(field, "must be non-negative");
      }
    }
  }
  return node.get<T>();
}

template <class T>
std::vector<T> get_number_list(const nlohmann::json& node, const std::string& field) {
  std::vector<T> out;
  if (node.is_array()) {
    if (node.empty()) config_error(field, "list is empty");
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(get_number<T>(node[i], field + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(get_number<T>(node, field));
  }
  return out;
}

inline ModelSpec model_from_json(const nlohmann::json& node, const std::string& field) {
  ModelSpec spec;
  if (node.is_string()) {
    const auto name = node.get<std::string>();
    if (name == "model1a") {
      spec.rho = 0.0;
    } else if (name == "model1b") {
      spec.rho = 0.5;
    } else if (name == "model2a") {
      spec.family = ModelFamily::Model2;
      spec.component = Component::Square;
    } else if (name == "model2b") {
      spec.family = ModelFamily::Model2;
      spec.component = Component::Cosine;
    } else {
      config_error(field, "unknown model '" + name + "'");
    }
    return spec;
  }
  if (!node.is_object()) config_error(field, "expected a model name or object");
  for (const auto& [key, value] : node.items()) {
    const std::string f = field + "." + key;
    if (key == "family") {
      const auto v = value.is_string() ? value.get<std::string>() : "";
      if (v == "model1") spec.family = ModelFamily::Model1;
      else if (v == "model2") spec.family = ModelFamily::Model2;
      else config_error(f, "expected model1 or model2");
    } else if (key == "component") {
      const auto v = value.is_string() ? value.get<std::string>() : "";
      if (v == "linear") spec.component = Component::Linear;
      else if (v == "square") spec.component = Component::Square;
      else if (v == "cosine") spec.component = Component::Cosine;
      else config_error(f, "expected linear, square or cosine");
    } else if (key == "rho") {
      spec.rho = get_number<double>(value, f);
    } else if (key == "sigma") {
      spec.sigma = get_number<double>(value, f);
    } else if (key == "p") {
      spec.p = get_number<std::size_t>(value, f);
    } else {
      config_error(f, "unknown key");
    }
  }
  if (spec.family == ModelFamily::Model2 && spec.component == Component::Linear &&
      !node.contains("component")) {
    spec.component = Component::Square;
  }
  return spec;
}

}  // namespace detail

inline ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "partial_recovery") return ExperimentKind::PartialRecovery;
  if (name == "exact_recovery") return ExperimentKind::ExactRecovery;
  if (name == "threshold_study") return ExperimentKind::ThresholdStudy;
  if (name == "sdi_sis_agreement") return ExperimentKind::Agreement;
  detail::config_error("experiment", "unknown experiment '" + name + "'");
}

/// Reads a bench configuration. The grid is the product models x n x s.
/// Throws InputError naming the offending field.
inline BenchSpec parse_bench_config(const nlohmann::json& root) {
  using detail::config_error;
  if (!root.is_object()) config_error("<root>", "expected a JSON object");
  static const char* known[] = {"experiment", "models", "n", "s", "methods", "replications",
                                "threshold_method", "permutations", "master_seed", "workers"};
  for (const auto& [key, value] : root.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) config_error(key, "unknown key");
  }
  for (const char* required : {"experiment", "models", "n", "s"}) {
    if (!root.contains(required)) config_error(required, "missing");
  }

  BenchSpec out;
  if (!root["experiment"].is_string()) config_error("experiment", "expected a string");
  out.kind = parse_experiment_kind(root["experiment"].get<std::string>());
  ExperimentConfig& cfg = out.config;
  cfg.selection = out.kind == ExperimentKind::ThresholdStudy ? SelectionRule::Elbow
                                                             : SelectionRule::KnownS;

  const auto& models = root["models"];
  if (!models.is_array() || models.empty()) config_error("models", "expected a non-empty list");
  const auto ns = detail::get_number_list<std::size_t>(root["n"], "n");
  const auto ss = detail::get_number_list<std::size_t>(root["s"], "s");
  for (std::size_t m = 0; m < models.size(); ++m) {
    const std::string field = "models[" + std::to_string(m) + "]";
    const ModelSpec base = detail::model_from_json(models[m], field);
    for (std::size_t n : ns) {
      for (std::size_t s : ss) {
        ModelSpec spec = base;
        spec.n = n;
        spec.s = s;
        try {
          spec.validate();
        } catch (const std::invalid_argument& e) {
          config_error(field, e.what());
        }
        cfg.spec_grid.push_back(spec);
      }
    }
  }

  if (root.contains("methods")) {
    const auto& methods = root["methods"];
    if (!methods.is_array() || methods.empty()) config_error("methods", "expected a non-empty list");
    cfg.methods.clear();
    for (const auto& m : methods) {
      const auto name = m.is_string() ? m.get<std::string>() : "";
      if (name == "SDI") cfg.methods.push_back(RankMethod::SDI);
      else if (name == "SIS") cfg.methods.push_back(RankMethod::SIS);
      else config_error("methods", "expected SDI or SIS");
    }
  }
  if (root.contains("replications")) {
    cfg.replications = detail::get_number<int>(root["replications"], "replications");
    if (cfg.replications < 1) config_error("replications", "must be at least 1");
  }
  if (root.contains("threshold_method")) {
    const auto& node = root["threshold_method"];
    const auto name = node.is_string() ? node.get<std::string>() : "";
    if (name == "known-s") cfg.selection = SelectionRule::KnownS;
    else if (name == "permutation") cfg.selection = SelectionRule::Permutation;
    else if (name == "elbow") cfg.selection = SelectionRule::Elbow;
    else config_error("threshold_method", "expected known-s, permutation or elbow");
  }
  if (root.contains("permutations")) {
    cfg.permutations = detail::get_number_list<int>(root["permutations"], "permutations");
    for (int t : cfg.permutations) {
      if (t < 1) config_error("permutations", "counts must be at least 1");
    }
  }
  if (root.contains("master_seed")) {
    cfg.master_seed = detail::get_number<std::uint64_t>(root["master_seed"], "master_seed");
  }
  if (root.contains("workers")) {
    cfg.workers = detail::get_number<unsigned>(root["workers"], "workers");
  }

  const bool threshold = out.kind == ExperimentKind::ThresholdStudy;
  if (threshold == (cfg.selection == SelectionRule::KnownS)) {
    config_error("threshold_method", threshold ? "threshold_study needs permutation or elbow"
                                               : "this experiment needs known-s");
  }
  if (out.kind == ExperimentKind::Agreement &&
      (!cfg.uses(RankMethod::SDI) || !cfg.uses(RankMethod::SIS))) {
    config_error("methods", "sdi_sis_agreement needs both SDI and SIS");
  }
  return out;
}

inline RecoveryResult run_bench(const BenchSpec& bench) {
  switch (bench.kind) {
    case ExperimentKind::PartialRecovery: return run_partial_recovery(bench.config);
    case ExperimentKind::ExactRecovery: return run_exact_recovery(bench.config);
    case ExperimentKind::ThresholdStudy: return run_threshold_study(bench.config);
    case ExperimentKind::Agreement: return run_sdi_sis_agreement(bench.config);
  }
  throw std::logic_error("unhandled experiment kind");
}

namespace detail {
template <class F>
void for_each_metric(const GridPointResult& row, F&& f) {
  if (row.partial_recovery) f("partial_recovery", *row.partial_recovery);
  if (row.exact_recovery) f("exact_recovery", *row.exact_recovery);
  if (row.selected_size_mean) f("selected_size_mean", *row.selected_size_mean);
  if (row.ranking_agreement) f("ranking_agreement", *row.ranking_agreement);
  if (row.gamma_mean) f("gamma_mean", *row.gamma_mean);
}
}  // namespace detail

/// Flat records, one line per grid point x method x metric.
inline std::string results_to_csv(const RecoveryResult& result) {
  std::ostringstream out;
  out << "model,n,p,s,rho,sigma,method,metric,value,replications,seed\n";
  for (const auto& row : result.rows) {
    detail::for_each_metric(row, [&](const char* metric, double value) {
      out << row.spec.label() << ',' << row.spec.n << ',' << row.spec.p << ',' << row.spec.s
          << ',' << format_double(row.spec.rho) << ',' << format_double(row.spec.sigma) << ','
          << row.method << ',' << metric << ',' << format_double(value) << ','
          << row.replications << ',' << result.master_seed << '\n';
    });
  }
  return out.str();
}

inline nlohmann::json results_to_json(const RecoveryResult& result) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json rec = {{"model", row.spec.label()},
                          {"family", to_string(row.spec.family)},
                          {"component", to_string(row.spec.component)},
                          {"n", row.spec.n},
                          {"p", row.spec.p},
                          {"s", row.spec.s},
                          {"rho", row.spec.rho},
                          {"sigma", row.spec.sigma},
                          {"method", row.method},
                          {"replications", row.replications}};
    detail::for_each_metric(row, [&](const char* metric, double value) { rec[metric] = value; });
    grid.push_back(std::move(rec));
  }
  return {{"experiment", result.experiment}, {"master_seed", result.master_seed}, {"grid", grid}};
}

}  // namespace sdiscreen
