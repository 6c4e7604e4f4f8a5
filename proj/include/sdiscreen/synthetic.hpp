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
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdiscreen/dataset.hpp"
#include "sdiscreen/rng.hpp"

namespace sdiscreen {

enum class ModelFamily { Model1, Model2 };
enum class Component { Linear, Square, Cosine };

inline const char* to_string(ModelFamily f) { return f == ModelFamily::Model1 ? "model1" : "model2"; }

inline const char* to_string(Component c) {
  switch (c) {
    case Component::Linear: return "linear";
    case Component::Square: return "square";
    case Component::Cosine: return "cosine";
  }
  return "?";
}

/// Sparse additive benchmark model
///   Y = s^{-1/2} * sum_{j < s} g(X_j) + N(0, sigma^2)
/// Model 1: equicorrelated standard Gaussians, g(x) = x.
/// Model 2: independent Uniform[0, 1], g(x) = x^2 or cos(2 pi x).
struct ModelSpec {
  ModelFamily family = ModelFamily::Model1;
  Component component = Component::Linear;
  std::size_t n = 1000;
  std::size_t p = 200;
  std::size_t s = 4;
  double rho = 0.0;
  double sigma = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 2) throw std::invalid_argument("model spec: n must be at least 2");
    if (p < 1) throw std::invalid_argument("model spec: p must be at least 1");
    if (s < 1 || s > p) throw std::invalid_argument("model spec: s must lie in [1, p]");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw std::invalid_argument("model spec: sigma must be finite and non-negative");
    }
    if (family == ModelFamily::Model1) {
      if (component != Component::Linear) {
        throw std::invalid_argument("model spec: model1 requires the linear component");
      }
      if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument("model spec: rho must lie in [0, 1)");
      }
    } else if (component == Component::Linear) {
      throw std::invalid_argument("model spec: model2 requires the square or cosine component");
    }
  }

  /// Short label: model1a (rho = 0), model1b (rho = 0.5), model2a (square),
  /// model2b (cosine); other correlations print as model1(rho=...).
  std::string label() const {
    if (family == ModelFamily::Model2) {
      return component == Component::Square ? "model2a" : "model2b";
    }
    if (rho == 0.0) return "model1a";
    if (rho == 0.5) return "model1b";
    return "model1(rho=" + std::to_string(rho) + ")";
  }
};

struct LabeledDataset {
  Dataset data;
  SupportSet truth;
  // Minimum variance of a single relevant term s^{-1/2} g(X_j).
  double population_signal = 0.0;
  // True when population_signal ignores correlation (Model 1, rho > 0).
  bool signal_approximate = false;
};

namespace detail {
constexpr std::uint64_t kColumnTag = 1;
constexpr std::uint64_t kFactorTag = 2;
constexpr std::uint64_t kNoiseTag = 3;

inline Stream tagged_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return Stream(derive_key(derive_key(seed, tag), index));
}
}  // namespace detail

/// n x p matrix (column-major) of N(0, 1) variables with pairwise correlation
/// rho, built from one shared factor: X_j = sqrt(rho) Z_0 + sqrt(1 - rho) Z_j.
inline std::vector<std::vector<double>> sample_equicorrelated_gaussian(std::size_t n,
                                                                       std::size_t p,
                                                                       double rho,
                                                                       std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::invalid_argument("equicorrelated sampling requires rho in [0, 1)");
  }
  std::vector<double> factor(n, 0.0);
  if (rho > 0.0) {
    Stream f = detail::tagged_stream(seed, detail::kFactorTag, 0);
    for (auto& v : factor) v = f.normal();
  }
  const double a = std::sqrt(rho);
  const double b = std::sqrt(1.0 - rho);
  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  for (std::size_t j = 0; j < p; ++j) {
    Stream z = detail::tagged_stream(seed, detail::kColumnTag, j);
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = a * factor[i] + b * z.normal();
  }
  return cols;
}

inline double apply_component(Component c, double x) {
  switch (c) {
    case Component::Linear: return x;
    case Component::Square: return x * x;
    case Component::Cosine: return std::cos(2.0 * std::numbers::pi * x);
  }
  return x;
}

/// Variance of one component g(X) under the model's marginal law:
/// Var(X) = 1, Var(X^2) = 1/5 - 1/9 = 4/45, Var(cos 2 pi U) = 1/2.
inline double component_variance(Component c) {
  switch (c) {
    case Component::Linear: return 1.0;
    case Component::Square: return 4.0 / 45.0;
    case Component::Cosine: return 0.5;
  }
  return 0.0;
}

/// Draws one dataset from the model. Relevant variables are X1..Xs.
inline LabeledDataset generate(const ModelSpec& spec) {
  spec.validate();
  LabeledDataset out;
  Dataset& d = out.data;
  if (spec.family == ModelFamily::Model1) {
    d.predictors = sample_equicorrelated_gaussian(spec.n, spec.p, spec.rho, spec.seed);
  } else {
    d.predictors.assign(spec.p, std::vector<double>(spec.n));
    for (std::size_t j = 0; j < spec.p; ++j) {
      Stream u = detail::tagged_stream(spec.seed, detail::kColumnTag, j);
      for (auto& v : d.predictors[j]) v = u.uniform();
    }
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.s));
  Stream noise = detail::tagged_stream(spec.seed, detail::kNoiseTag, 0);
  d.response.assign(spec.n, 0.0);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double signal = 0.0;
    for (std::size_t j = 0; j < spec.s; ++j) {
      signal += apply_component(spec.component, d.predictors[j][i]);
    }
    const double eps = noise.normal();
    d.response[i] = scale * signal + spec.sigma * eps;
  }
  d.validate();

  out.truth.indices.resize(spec.s);
  for (std::size_t j = 0; j < spec.s; ++j) out.truth.indices[j] = j;
  out.population_signal = component_variance(spec.component) / static_cast<double>(spec.s);
  out.signal_approximate = spec.family == ModelFamily::Model1 && spec.rho > 0.0;
  return out;
}

}  // namespace sdiscreen
