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
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdiscreen/numeric.hpp"

namespace sdiscreen {

using Column = std::span<const double>;

/// Optimal single split of one predictor. A sample goes left when
/// `x <= split_value`; `split_value` is always an observed x value (the
/// largest one in the left node).
struct StumpFit {
  double split_value = 0.0;
  double left_mean = 0.0;
  double right_mean = 0.0;
  std::size_t left_count = 0;
  std::size_t right_count = 0;
  double delta = 0.0;
  // Set when x is constant: every sample sits in the left node, delta is 0.
  bool degenerate = false;

  bool goes_left(double x) const { return x <= split_value; }
  double predict(double x) const { return goes_left(x) ? left_mean : right_mean; }
};

namespace detail {

inline void check_pair(Column x, Column y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("predictor and response lengths differ");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("stump fitting needs at least two samples");
  }
  require_finite(x, "predictor");
  require_finite(y, "response");
}

/// Two candidate impurity reductions closer than this are treated as tied and
/// the smaller split value wins. Scaled by Var(y) so that the rounding noise of
/// the two algebraic forms of delta never reorders exact ties.
inline double tie_tolerance(double response_variance) {
  return 1e-12 * response_variance;
}

inline StumpFit degenerate_fit(Column x, Column y) {
  StumpFit fit;
  fit.split_value = x[0];
  fit.left_mean = fit.right_mean = mean(y);
  fit.left_count = x.size();
  fit.right_count = 0;
  fit.delta = 0.0;
  fit.degenerate = true;
  return fit;
}

}  // namespace detail

/// Impurity reduction of the split `x <= z`, from the sum-of-squares
/// definition: (SSE_total - SSE_left - SSE_right) / n.
inline double impurity_reduction_at_split(Column x, Column y, double z) {
  detail::check_pair(x, y);
  const std::size_t n = x.size();
  CompensatedSum sum_l, sum_r;
  std::size_t n_l = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= z) {
      sum_l.add(y[i]);
      ++n_l;
    } else {
      sum_r.add(y[i]);
    }
  }
  const std::size_t n_r = n - n_l;
  if (n_l == 0 || n_r == 0) {
    throw std::invalid_argument("invalid split point: empty daughter node");
  }
  const double m = mean(y);
  const double m_l = sum_l.value() / static_cast<double>(n_l);
  const double m_r = sum_r.value() / static_cast<double>(n_r);
  CompensatedSum sse, sse_l, sse_r;
  for (std::size_t i = 0; i < n; ++i) {
    sse.add((y[i] - m) * (y[i] - m));
    if (x[i] <= z) {
      sse_l.add((y[i] - m_l) * (y[i] - m_l));
    } else {
      sse_r.add((y[i] - m_r) * (y[i] - m_r));
    }
  }
  return (sse.value() - sse_l.value() - sse_r.value()) / static_cast<double>(n);
}

/// Same quantity via (N_L/n)(N_R/n)(mean_L - mean_R)^2.
inline double impurity_reduction_product_form(Column x, Column y, double z) {
  detail::check_pair(x, y);
  const std::size_t n = x.size();
  CompensatedSum sum_l, sum_r;
  std::size_t n_l = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= z) {
      sum_l.add(y[i]);
      ++n_l;
    } else {
      sum_r.add(y[i]);
    }
  }
  const std::size_t n_r = n - n_l;
  if (n_l == 0 || n_r == 0) {
    throw std::invalid_argument("invalid split point: empty daughter node");
  }
  const double dn = static_cast<double>(n);
  const double diff = sum_l.value() / static_cast<double>(n_l) -
                      sum_r.value() / static_cast<double>(n_r);
  return (static_cast<double>(n_l) / dn) * (static_cast<double>(n_r) / dn) * diff * diff;
}

/// Exact optimal stump for one predictor: sort once, then scan the
/// boundaries between consecutive distinct x values with compensated prefix
/// sums of the centred response. O(n log n).
///
/// Throws std::invalid_argument for n < 2, mismatched lengths or non-finite
/// input. A constant predictor yields a `degenerate` fit with delta = 0.
inline StumpFit fit_optimal_stump(Column x, Column y) {
  detail::check_pair(x, y);
  const std::size_t n = x.size();
  const double y_mean = mean(y);

  std::vector<std::pair<double, double>> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = {x[i], y[i] - y_mean};
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  if (!(sorted.front().first < sorted.back().first)) {
    return detail::degenerate_fit(x, y);
  }

  CompensatedSum total;
  CompensatedSum total_sq;
  for (const auto& [xv, c] : sorted) {
    total.add(c);
    total_sq.add(c * c);
  }
  const double tol = detail::tie_tolerance(total_sq.value() / static_cast<double>(n));
  const double dn = static_cast<double>(n);

  StumpFit best;
  bool have_best = false;
  CompensatedSum prefix;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    prefix.add(sorted[i].second);
    if (!(sorted[i].first < sorted[i + 1].first)) continue;
    const double n_l = static_cast<double>(i + 1);
    const double n_r = dn - n_l;
    const double s_l = prefix.value();
    const double m_l = s_l / n_l;
    const double m_r = (total.value() - s_l) / n_r;
    const double delta = (n_l / dn) * (n_r / dn) * (m_l - m_r) * (m_l - m_r);
    if (!have_best || delta > best.delta + tol) {
      best.split_value = sorted[i].first;
      best.left_mean = m_l + y_mean;
      best.right_mean = m_r + y_mean;
      best.left_count = i + 1;
      best.right_count = n - i - 1;
      best.delta = delta;
      have_best = true;
    }
  }
  return best;
}

/// Pearson correlation between the stump's fitted values and the response.
/// Equals sqrt(delta / Var(y)); computed here directly from the predictions.
/// Throws std::domain_error when the response has zero variance.
inline double stump_correlation(const StumpFit& fit, Column x, Column y) {
  detail::check_pair(x, y);
  if (!(plugin_variance(y) > 0.0)) {
    throw std::domain_error("zero response variance");
  }
  std::vector<double> fitted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fitted[i] = fit.predict(x[i]);
  return std::max(0.0, pearson(fitted, y));
}

/// Deterministic lower bound on the optimal delta from the linear
/// correlation of x with y: Var(y) * corr(x, y)^2 / (log(2n) + 1).
/// Returns 0 for constant x or y.
inline double linear_signal_lower_bound(Column x, Column y) {
  detail::check_pair(x, y);
  const double r = pearson(x, y);
  const double n = static_cast<double>(x.size());
  return plugin_variance(y) * r * r / (std::log(2.0 * n) + 1.0);
}

}  // namespace sdiscreen
