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

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace sdiscreen {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double mean(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

/// Plug-in variance (divides by n), the normalisation used by every impurity
/// quantity in this library.
inline double plugin_variance(std::span<const double> v) {
  const double m = mean(v);
  CompensatedSum s;
  for (double x : v) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(v.size());
}

/// Plug-in covariance (divides by n).
inline double plugin_covariance(std::span<const double> a,
                                std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add((a[i] - ma) * (b[i] - mb));
  return s.value() / static_cast<double>(a.size());
}

/// Pearson sample correlation; 0 when either side has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double va = plugin_variance(a);
  const double vb = plugin_variance(b);
  if (!(va > 0.0) || !(vb > 0.0)) return 0.0;
  const double r = plugin_covariance(a, b) / std::sqrt(va * vb);
  return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

inline void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw std::invalid_argument(std::string(what) + ": non-finite value at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace sdiscreen
