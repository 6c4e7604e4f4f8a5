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
#include <vector>

#include "sdiscreen/numeric.hpp"
#include "sdiscreen/stump.hpp"

namespace sdiscreen {

/// Reference stump search: evaluates the sum-of-squares impurity reduction at
/// every distinct x value (except the largest) from scratch. O(n^2); used to
/// validate fit_optimal_stump, never on the hot path.
inline StumpFit brute_force_oracle(Column x, Column y) {
  detail::check_pair(x, y);
  std::vector<double> candidates(x.begin(), x.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() < 2) return detail::degenerate_fit(x, y);
  candidates.pop_back();

  const double tol = detail::tie_tolerance(plugin_variance(y));
  double best_z = candidates.front();
  double best_delta = impurity_reduction_at_split(x, y, best_z);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double d = impurity_reduction_at_split(x, y, candidates[k]);
    if (d > best_delta + tol) {
      best_delta = d;
      best_z = candidates[k];
    }
  }

  StumpFit fit;
  fit.split_value = best_z;
  fit.delta = best_delta;
  CompensatedSum sl, sr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= best_z) {
      sl.add(y[i]);
      ++fit.left_count;
    } else {
      sr.add(y[i]);
      ++fit.right_count;
    }
  }
  fit.left_mean = sl.value() / static_cast<double>(fit.left_count);
  fit.right_mean = sr.value() / static_cast<double>(fit.right_count);
  return fit;
}

}  // namespace sdiscreen
