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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdiscreen/dataset.hpp"
#include "sdiscreen/numeric.hpp"
#include "sdiscreen/parallel.hpp"
#include "sdiscreen/rng.hpp"
#include "sdiscreen/screening.hpp"

namespace sdiscreen {

/// Two-component 1-D Gaussian mixture. Component 0 has the smaller mean.
struct MixtureFit {
  std::array<double, 2> means{};
  std::array<double, 2> variances{};
  std::array<double, 2> weights{};
  double log_likelihood = 0.0;
  int iterations = 0;
  // Log-likelihood after initialisation and after every EM step.
  std::vector<double> trace;

  /// Posterior probability that `x` came from component 1.
  double responsibility_high(double x) const;
};

enum class ThresholdMethod { Permutation, Elbow, Fixed };

inline const char* to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::Permutation: return "permutation";
    case ThresholdMethod::Elbow: return "elbow";
    case ThresholdMethod::Fixed: return "value";
  }
  return "?";
}

struct ThresholdDecision {
  double gamma = 0.0;
  SupportSet selected;
  ThresholdMethod method = ThresholdMethod::Fixed;
  std::vector<double> scores;
  std::optional<MixtureFit> mixture;
  // Permutation method: max delta over variables for each permuted dataset,
  // in draw order. gamma is their maximum.
  std::vector<double> null_maxima;
};

namespace detail {

constexpr int kMaxEmIterations = 500;
constexpr double kEmTolerance = 1e-9;
constexpr double kVarianceFloorScale = 1e-12;

inline double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

inline double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Moments {
  double mean;
  double var;
};

inline Moments side_moments(std::span<const double> v) {
  return {mean(v), plugin_variance(v)};
}

}  // namespace detail

inline double MixtureFit::responsibility_high(double x) const {
  const double l0 = std::log(weights[0]) + detail::log_normal_pdf(x, means[0], variances[0]);
  const double l1 = std::log(weights[1]) + detail::log_normal_pdf(x, means[1], variances[1]);
  return std::exp(l1 - detail::log_sum_exp(l0, l1));
}

/// EM for a two-component 1-D Gaussian mixture.
///
/// Initialisation splits the sorted scores at their largest consecutive gap
/// (the seed only picks among exactly tied gaps). Iterates until the
/// log-likelihood gain drops below 1e-9 or 500 steps. Variances are floored at
/// 1e-12 * range^2. Throws std::invalid_argument for fewer than two scores or
/// when all scores are identical.
inline MixtureFit gmm_em(std::span<const double> scores, std::uint64_t seed) {
  if (scores.size() < 2) throw std::invalid_argument("mixture fit needs at least two scores");
  require_finite(scores, "scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  if (!(range > 0.0)) {
    throw std::invalid_argument("no elbow: all scores are identical");
  }
  const double floor = detail::kVarianceFloorScale * range * range;
  const std::size_t p = sorted.size();

  double max_gap = -1.0;
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i + 1 < p; ++i) {
    const double gap = sorted[i + 1] - sorted[i];
    if (gap > max_gap) {
      max_gap = gap;
      tied.assign(1, i);
    } else if (gap == max_gap) {
      tied.push_back(i);
    }
  }
  std::size_t cut = tied.front();
  if (tied.size() > 1) {
    Stream rng(derive_key(seed, 0x656c626f77ULL));
    cut = tied[rng.below(tied.size())];
  }

  MixtureFit fit;
  const std::span<const double> all(sorted);
  const auto lo = detail::side_moments(all.first(cut + 1));
  const auto hi = detail::side_moments(all.subspan(cut + 1));
  fit.means = {lo.mean, hi.mean};
  fit.variances = {std::max(lo.var, floor), std::max(hi.var, floor)};
  fit.weights = {static_cast<double>(cut + 1) / static_cast<double>(p),
                 static_cast<double>(p - cut - 1) / static_cast<double>(p)};

  std::vector<double> resp(p);  // responsibility of component 1
  auto e_step = [&](const MixtureFit& f) {
    CompensatedSum ll;
    for (std::size_t i = 0; i < p; ++i) {
      const double l0 = std::log(f.weights[0]) +
                        detail::log_normal_pdf(sorted[i], f.means[0], f.variances[0]);
      const double l1 = std::log(f.weights[1]) +
                        detail::log_normal_pdf(sorted[i], f.means[1], f.variances[1]);
      const double total = detail::log_sum_exp(l0, l1);
      resp[i] = std::exp(l1 - total);
      ll.add(total);
    }
    return ll.value();
  };

  fit.log_likelihood = e_step(fit);
  fit.trace.push_back(fit.log_likelihood);
  while (fit.iterations < detail::kMaxEmIterations) {
    MixtureFit next = fit;
    std::array<CompensatedSum, 2> mass, first;
    for (std::size_t i = 0; i < p; ++i) {
      mass[0].add(1.0 - resp[i]);
      mass[1].add(resp[i]);
      first[0].add((1.0 - resp[i]) * sorted[i]);
      first[1].add(resp[i] * sorted[i]);
    }
    const std::array<double, 2> n_k = {mass[0].value(), mass[1].value()};
    // An emptied component cannot be re-estimated; keep the last parameters.
    if (!(n_k[0] > 1e-10) || !(n_k[1] > 1e-10)) break;
    for (int k = 0; k < 2; ++k) next.means[k] = first[k].value() / n_k[k];
    std::array<CompensatedSum, 2> second;
    for (std::size_t i = 0; i < p; ++i) {
      const double d0 = sorted[i] - next.means[0];
      const double d1 = sorted[i] - next.means[1];
      second[0].add((1.0 - resp[i]) * d0 * d0);
      second[1].add(resp[i] * d1 * d1);
    }
    for (int k = 0; k < 2; ++k) {
      next.variances[k] = std::max(second[k].value() / n_k[k], floor);
      next.weights[k] = n_k[k] / static_cast<double>(p);
    }
    const double previous = fit.log_likelihood;
    next.log_likelihood = e_step(next);
    next.iterations = fit.iterations + 1;
    fit = std::move(next);
    fit.trace.push_back(fit.log_likelihood);
    if (std::abs(fit.log_likelihood - previous) < detail::kEmTolerance) break;
  }

  if (fit.means[0] > fit.means[1]) {
    std::swap(fit.means[0], fit.means[1]);
    std::swap(fit.variances[0], fit.variances[1]);
    std::swap(fit.weights[0], fit.weights[1]);
  }
  return fit;
}

/// Selects the high cluster of a two-component mixture fitted to the scores.
///
/// Each score is assigned to its more probable component. The selected set is
/// every score strictly above the largest score assigned to the low
/// component, and gamma is the midpoint between that score and the smallest
/// selected score. If nothing lies above the low cluster the selection is
/// empty and gamma is the largest score.
inline ThresholdDecision elbow_threshold(std::span<const double> scores, std::uint64_t seed) {
  for (double s : scores) {
    if (s < 0.0) throw std::invalid_argument("elbow threshold expects non-negative scores");
  }
  ThresholdDecision out;
  out.method = ThresholdMethod::Elbow;
  out.scores.assign(scores.begin(), scores.end());
  MixtureFit mix = gmm_em(scores, seed);

  double low_max = -std::numeric_limits<double>::infinity();
  for (double s : scores) {
    if (mix.responsibility_high(s) <= 0.5) low_max = std::max(low_max, s);
  }
  double high_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] > low_max) {
      out.selected.indices.push_back(j);
      high_min = std::min(high_min, scores[j]);
    }
  }
  if (out.selected.indices.empty()) {
    out.gamma = *std::max_element(scores.begin(), scores.end());
  } else if (low_max == -std::numeric_limits<double>::infinity()) {
    out.gamma = high_min;
  } else {
    out.gamma = 0.5 * (low_max + high_min);
  }
  out.mixture = std::move(mix);
  return out;
}

/// Keeps every variable whose score is at least gamma.
inline ThresholdDecision fixed_threshold(std::span<const double> scores, double gamma) {
  ThresholdDecision out;
  out.method = ThresholdMethod::Fixed;
  out.gamma = gamma;
  out.scores.assign(scores.begin(), scores.end());
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] >= gamma) out.selected.indices.push_back(j);
  }
  return out;
}

/// Largest optimal-stump delta over all variables after permuting the
/// predictor rows jointly by `perm` (response left in place).
inline double permuted_max_delta(const Dataset& d, std::span<const std::size_t> perm) {
  std::vector<double> column(d.n());
  double best = 0.0;
  for (std::size_t j = 0; j < d.p(); ++j) {
    const auto& src = d.predictors[j];
    for (std::size_t i = 0; i < d.n(); ++i) column[i] = src[perm[i]];
    best = std::max(best, fit_optimal_stump(column, d.response).delta);
  }
  return best;
}

/// Null-calibrated threshold: gamma is the largest delta seen over all
/// variables and `permutations` row permutations of the predictors. The t-th
/// permutation depends only on (seed, t), so the thresholds for T and T' < T
/// under one seed are nested. Permutations run on up to `workers` threads.
inline ThresholdDecision permutation_threshold(const Dataset& d, int permutations,
                                               std::uint64_t seed, unsigned workers = 1,
                                               const Ranking* original = nullptr) {
  if (permutations < 1) throw std::invalid_argument("permutation count must be at least 1");
  detail::require_screenable(d);
  ThresholdDecision out;
  out.method = ThresholdMethod::Permutation;
  out.scores = original ? original->scores : rank_sdi(d).scores;
  out.null_maxima.resize(static_cast<std::size_t>(permutations));
  parallel_for(out.null_maxima.size(), workers, [&](std::size_t t) {
    Stream rng(derive_key(seed, t));
    const auto perm = random_permutation(d.n(), rng);
    out.null_maxima[t] = permuted_max_delta(d, perm);
  });
  out.gamma = *std::max_element(out.null_maxima.begin(), out.null_maxima.end());
  for (std::size_t j = 0; j < out.scores.size(); ++j) {
    if (out.scores[j] >= out.gamma) out.selected.indices.push_back(j);
  }
  return out;
}

}  // namespace sdiscreen
