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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdiscreen/dataset.hpp"
#include "sdiscreen/parallel.hpp"
#include "sdiscreen/rng.hpp"
#include "sdiscreen/screening.hpp"
#include "sdiscreen/synthetic.hpp"
#include "sdiscreen/thresholding.hpp"

namespace sdiscreen {

enum class SelectionRule { KnownS, Permutation, Elbow };

inline const char* to_string(SelectionRule r) {
  switch (r) {
    case SelectionRule::KnownS: return "known-s";
    case SelectionRule::Permutation: return "permutation";
    case SelectionRule::Elbow: return "elbow";
  }
  return "?";
}

struct ExperimentConfig {
  std::vector<ModelSpec> spec_grid;
  std::vector<RankMethod> methods{RankMethod::SDI, RankMethod::SIS};
  int replications = 10;
  SelectionRule selection = SelectionRule::KnownS;
  // Permutation counts to report for the permutation rule. All counts share
  // the same permutation draws, so larger counts extend smaller ones.
  std::vector<int> permutations{10};
  std::uint64_t master_seed = 0;
  // Worker threads (0 = hardware concurrency). Never affects results.
  unsigned workers = 1;

  void validate() const {
    if (spec_grid.empty()) throw std::invalid_argument("experiment: spec_grid is empty");
    if (replications < 1) throw std::invalid_argument("experiment: replications must be >= 1");
    if (methods.empty()) throw std::invalid_argument("experiment: no methods given");
    for (const auto& spec : spec_grid) spec.validate();
    if (selection == SelectionRule::Permutation) {
      if (permutations.empty()) throw std::invalid_argument("experiment: permutations is empty");
      for (int t : permutations) {
        if (t < 1) throw std::invalid_argument("experiment: permutation counts must be >= 1");
      }
    }
  }

  bool uses(RankMethod m) const {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
  }
};

/// One grid point for one method. Unset metrics were not part of the run.
struct GridPointResult {
  ModelSpec spec;
  std::string method;
  std::optional<double> partial_recovery;
  std::optional<double> exact_recovery;
  std::optional<double> selected_size_mean;
  std::optional<double> ranking_agreement;
  std::optional<double> gamma_mean;
  int replications = 0;
};

struct RecoveryResult {
  std::string experiment;
  std::uint64_t master_seed = 0;
  std::vector<GridPointResult> rows;

  /// First row for (grid spec index order) matching method and spec label;
  /// throws when absent.
  const GridPointResult& find(const std::string& method, std::size_t n, std::size_t s,
                              const std::string& label) const {
    for (const auto& row : rows) {
      if (row.method == method && row.spec.n == n && row.spec.s == s && row.spec.label() == label) {
        return row;
      }
    }
    throw std::out_of_range("no result row for " + method + " " + label);
  }
};

/// |selected ∩ truth| / |truth|.
inline double recovered_fraction(const SupportSet& selected, const SupportSet& truth) {
  std::size_t hit = 0;
  for (std::size_t j : truth.indices) hit += selected.contains(j) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(truth.sparsity());
}

/// Seed of replication `rep` at grid point `grid`.
inline std::uint64_t replication_seed(std::uint64_t master, std::size_t grid, std::size_t rep) {
  return derive_key(derive_key(master, grid), rep);
}

namespace detail {

constexpr std::uint64_t kThresholdTag = 0x7468726573ULL;

inline Ranking rank_with(RankMethod m, const Dataset& d) {
  return m == RankMethod::SDI ? rank_sdi(d) : rank_sis(d);
}

/// Runs `job(grid, rep, seed)` for every replication of every grid point and
/// returns results laid out as [grid][rep]. Scheduling never changes the
/// returned values.
template <class Outcome, class Job>
std::vector<std::vector<Outcome>> replicate(const ExperimentConfig& cfg, Job&& job) {
  const std::size_t reps = static_cast<std::size_t>(cfg.replications);
  std::vector<Outcome> flat(cfg.spec_grid.size() * reps);
  parallel_for(flat.size(), cfg.workers, [&](std::size_t k) {
    const std::size_t g = k / reps;
    const std::size_t r = k % reps;
    ModelSpec spec = cfg.spec_grid[g];
    spec.seed = replication_seed(cfg.master_seed, g, r);
    flat[k] = job(spec);
  });
  std::vector<std::vector<Outcome>> out(cfg.spec_grid.size());
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g].assign(flat.begin() + static_cast<std::ptrdiff_t>(g * reps),
                  flat.begin() + static_cast<std::ptrdiff_t>((g + 1) * reps));
  }
  return out;
}

inline GridPointResult make_row(const ModelSpec& spec, std::string method, int reps) {
  GridPointResult row;
  row.spec = spec;
  row.spec.seed = 0;
  row.method = std::move(method);
  row.replications = reps;
  return row;
}

inline double average(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace detail

/// Top-s selection by each method; mean recovered fraction of the support,
/// plus the s/p expectation of a uniformly random selection as "random".
inline RecoveryResult run_partial_recovery(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.selection != SelectionRule::KnownS) {
    throw std::invalid_argument("partial recovery requires the known-s rule");
  }
  struct Outcome {
    std::vector<double> fraction;  // per method
  };
  auto outcomes = detail::replicate<Outcome>(cfg, [&](const ModelSpec& spec) {
    const auto sample = generate(spec);
    Outcome o;
    for (RankMethod m : cfg.methods) {
      o.fraction.push_back(
          recovered_fraction(top_k(detail::rank_with(m, sample.data), spec.s), sample.truth));
    }
    return o;
  });

  RecoveryResult result{"partial_recovery", cfg.master_seed, {}};
  for (std::size_t g = 0; g < cfg.spec_grid.size(); ++g) {
    const auto& spec = cfg.spec_grid[g];
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      std::vector<double> vals;
      for (const auto& o : outcomes[g]) vals.push_back(o.fraction[k]);
      auto row = detail::make_row(spec, to_string(cfg.methods[k]), cfg.replications);
      row.partial_recovery = detail::average(vals);
      result.rows.push_back(std::move(row));
    }
    auto base = detail::make_row(spec, "random", cfg.replications);
    base.partial_recovery = static_cast<double>(spec.s) / static_cast<double>(spec.p);
    result.rows.push_back(std::move(base));
  }
  return result;
}

/// Fraction of replications whose top-s set equals the true support.
inline RecoveryResult run_exact_recovery(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.selection != SelectionRule::KnownS) {
    throw std::invalid_argument("exact recovery requires the known-s rule");
  }
  auto outcomes = detail::replicate<std::vector<char>>(cfg, [&](const ModelSpec& spec) {
    const auto sample = generate(spec);
    std::vector<char> hit;
    for (RankMethod m : cfg.methods) {
      hit.push_back(top_k(detail::rank_with(m, sample.data), spec.s) == sample.truth ? 1 : 0);
    }
    return hit;
  });

  RecoveryResult result{"exact_recovery", cfg.master_seed, {}};
  for (std::size_t g = 0; g < cfg.spec_grid.size(); ++g) {
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      int hits = 0;
      for (const auto& o : outcomes[g]) hits += o[k];
      auto row = detail::make_row(cfg.spec_grid[g], to_string(cfg.methods[k]), cfg.replications);
      row.exact_recovery = static_cast<double>(hits) / cfg.replications;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

/// Fraction of replications where the SDI and SIS top-s sets coincide. Also
/// reports each method's exact recovery on the same draws.
inline RecoveryResult run_sdi_sis_agreement(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.uses(RankMethod::SDI) || !cfg.uses(RankMethod::SIS)) {
    throw std::invalid_argument("agreement study needs both SDI and SIS");
  }
  struct Outcome {
    char agree = 0;
    char sdi_exact = 0;
    char sis_exact = 0;
  };
  auto outcomes = detail::replicate<Outcome>(cfg, [&](const ModelSpec& spec) {
    const auto sample = generate(spec);
    const auto a = top_k(rank_sdi(sample.data), spec.s);
    const auto b = top_k(rank_sis(sample.data), spec.s);
    return Outcome{a == b ? char{1} : char{0}, a == sample.truth ? char{1} : char{0},
                   b == sample.truth ? char{1} : char{0}};
  });

  RecoveryResult result{"sdi_sis_agreement", cfg.master_seed, {}};
  for (std::size_t g = 0; g < cfg.spec_grid.size(); ++g) {
    int agree = 0, sdi = 0, sis = 0;
    for (const auto& o : outcomes[g]) {
      agree += o.agree;
      sdi += o.sdi_exact;
      sis += o.sis_exact;
    }
    const double reps = cfg.replications;
    auto row = detail::make_row(cfg.spec_grid[g], "SDI~SIS", cfg.replications);
    row.ranking_agreement = agree / reps;
    result.rows.push_back(std::move(row));
    auto r_sdi = detail::make_row(cfg.spec_grid[g], "SDI", cfg.replications);
    r_sdi.exact_recovery = sdi / reps;
    result.rows.push_back(std::move(r_sdi));
    auto r_sis = detail::make_row(cfg.spec_grid[g], "SIS", cfg.replications);
    r_sis.exact_recovery = sis / reps;
    result.rows.push_back(std::move(r_sis));
  }
  return result;
}

/// Support-size estimation without knowing s. The permutation rule reports
/// one row per requested permutation count ("SDI-permutation-T<count>"); the
/// elbow rule reports a single "SDI-elbow" row.
inline RecoveryResult run_threshold_study(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.selection == SelectionRule::KnownS) {
    throw std::invalid_argument("threshold study requires the permutation or elbow rule");
  }
  std::vector<int> counts = cfg.permutations;
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  const std::size_t variants = cfg.selection == SelectionRule::Permutation ? counts.size() : 1;

  struct Outcome {
    std::vector<double> size;
    std::vector<char> exact;
    std::vector<double> gamma;
  };
  auto outcomes = detail::replicate<Outcome>(cfg, [&](const ModelSpec& spec) {
    const auto sample = generate(spec);
    const Ranking ranking = rank_sdi(sample.data);
    const std::uint64_t seed = derive_key(spec.seed, detail::kThresholdTag);
    Outcome o;
    auto record = [&](const ThresholdDecision& dec) {
      o.size.push_back(static_cast<double>(dec.selected.sparsity()));
      o.exact.push_back(dec.selected == sample.truth ? 1 : 0);
      o.gamma.push_back(dec.gamma);
    };
    if (cfg.selection == SelectionRule::Elbow) {
      record(elbow_threshold(ranking.scores, seed));
    } else {
      const auto full = permutation_threshold(sample.data, counts.back(), seed, 1, &ranking);
      for (int t : counts) {
        const double gamma = *std::max_element(full.null_maxima.begin(),
                                               full.null_maxima.begin() + t);
        record(fixed_threshold(ranking.scores, gamma));
      }
    }
    return o;
  });

  RecoveryResult result{"threshold_study", cfg.master_seed, {}};
  for (std::size_t g = 0; g < cfg.spec_grid.size(); ++g) {
    for (std::size_t v = 0; v < variants; ++v) {
      std::string name = cfg.selection == SelectionRule::Elbow
                             ? std::string("SDI-elbow")
                             : "SDI-permutation-T" + std::to_string(counts[v]);
      std::vector<double> sizes, gammas;
      int exact = 0;
      for (const auto& o : outcomes[g]) {
        sizes.push_back(o.size[v]);
        gammas.push_back(o.gamma[v]);
        exact += o.exact[v];
      }
      auto row = detail::make_row(cfg.spec_grid[g], std::move(name), cfg.replications);
      row.selected_size_mean = detail::average(sizes);
      row.exact_recovery = static_cast<double>(exact) / cfg.replications;
      row.gamma_mean = detail::average(gammas);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace sdiscreen
