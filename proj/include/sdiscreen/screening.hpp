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
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdiscreen/dataset.hpp"
#include "sdiscreen/numeric.hpp"
#include "sdiscreen/parallel.hpp"
#include "sdiscreen/stump.hpp"

namespace sdiscreen {

enum class RankMethod { SDI, SIS };

inline const char* to_string(RankMethod m) { return m == RankMethod::SDI ? "SDI" : "SIS"; }

/// Variables ordered by score, best first. `scores` is indexed by variable,
/// `order[k]` is the variable at rank k (0-based).
struct Ranking {
  std::vector<std::size_t> order;
  std::vector<double> scores;
  RankMethod method = RankMethod::SDI;

  std::size_t size() const { return order.size(); }
  /// Rank position (0-based) of every variable.
  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    return pos;
  }
};

/// Sorts by score descending; equal scores keep ascending variable index.
inline Ranking rank_by_scores(std::vector<double> scores, RankMethod method) {
  Ranking r;
  r.method = method;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  r.scores = std::move(scores);
  return r;
}

namespace detail {
inline void require_screenable(const Dataset& d) {
  if (d.p() == 0 || d.n() == 0) throw std::invalid_argument("empty dataset");
  if (d.n() < 2) throw std::invalid_argument("screening needs at least two samples");
  for (std::size_t j = 0; j < d.p(); ++j) {
    if (d.predictors[j].size() != d.n()) {
      throw std::invalid_argument("predictor column " + std::to_string(j) +
                                  " length does not match response");
    }
  }
}
}  // namespace detail

/// Optimal stump for every column. Columns are independent, so they are fitted
/// on up to `workers` threads (0 = hardware concurrency).
inline std::vector<StumpFit> fit_all_stumps(const Dataset& d, unsigned workers = 1) {
  detail::require_screenable(d);
  std::vector<StumpFit> fits(d.p());
  parallel_for(d.p(), workers,
               [&](std::size_t j) { fits[j] = fit_optimal_stump(d.column(j), d.response); });
  return fits;
}

inline Ranking rank_from_fits(const std::vector<StumpFit>& fits) {
  std::vector<double> scores(fits.size());
  for (std::size_t j = 0; j < fits.size(); ++j) scores[j] = fits[j].delta;
  return rank_by_scores(std::move(scores), RankMethod::SDI);
}

/// Ranks variables by the impurity reduction of their optimal stump.
inline Ranking rank_sdi(const Dataset& d, unsigned workers = 1) {
  return rank_from_fits(fit_all_stumps(d, workers));
}

/// Ranks variables by absolute marginal Pearson correlation with the response.
/// Constant columns score 0. Throws std::domain_error for a constant response.
inline Ranking rank_sis(const Dataset& d, unsigned workers = 1) {
  detail::require_screenable(d);
  if (!(plugin_variance(d.response) > 0.0)) {
    throw std::domain_error("zero response variance");
  }
  std::vector<double> scores(d.p());
  parallel_for(d.p(), workers, [&](std::size_t j) {
    scores[j] = std::abs(pearson(d.column(j), d.response));
  });
  return rank_by_scores(std::move(scores), RankMethod::SIS);
}

/// SDI on a 0/1 response. Variance impurity of a binary label is
/// p(1-p), half the Gini impurity 2p(1-p), so scores are reported in variance
/// units and the ordering matches a Gini stump exactly.
inline Ranking rank_sdi_classification(const Dataset& d, unsigned workers = 1) {
  detail::require_screenable(d);
  Dataset::require_binary(d.response);
  return rank_sdi(d, workers);
}

/// First k variables of the ranking.
inline SupportSet top_k(const Ranking& r, std::size_t k) {
  if (k < 1 || k > r.size()) {
    throw std::out_of_range("top_k: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(r.size()) + "]");
  }
  SupportSet s;
  s.indices.assign(r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

}  // namespace sdiscreen
