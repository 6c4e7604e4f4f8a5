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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "sdiscreen/numeric.hpp"

namespace sdiscreen {

enum class ResponseMode { Regression, BinaryClassification };

/// Column-major predictor matrix with a paired response.
struct Dataset {
  std::vector<std::vector<double>> predictors;
  std::vector<double> response;
  std::vector<std::string> names;
  ResponseMode mode = ResponseMode::Regression;

  std::size_t n() const { return response.size(); }
  std::size_t p() const { return predictors.size(); }
  std::span<const double> column(std::size_t j) const { return predictors[j]; }

  /// Throws std::invalid_argument on any broken invariant. Fills in default
  /// names X1..Xp when `names` is empty.
  void validate() {
    if (predictors.empty()) throw std::invalid_argument("dataset has no predictors");
    if (names.empty()) {
      names.reserve(p());
      for (std::size_t j = 0; j < p(); ++j) names.push_back("X" + std::to_string(j + 1));
    }
    if (names.size() != p()) throw std::invalid_argument("names and predictors differ in count");
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
      if (!seen.insert(name).second) {
        throw std::invalid_argument("duplicate variable name: " + name);
      }
    }
    for (std::size_t j = 0; j < p(); ++j) {
      if (predictors[j].size() != n()) {
        throw std::invalid_argument("column " + names[j] + " has length " +
                                    std::to_string(predictors[j].size()) + ", expected " +
                                    std::to_string(n()));
      }
      require_finite(predictors[j], names[j].c_str());
    }
    require_finite(response, "response");
    if (mode == ResponseMode::BinaryClassification) require_binary(response);
  }

  static void require_binary(std::span<const double> y) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] != 0.0 && y[i] != 1.0) {
        throw std::invalid_argument("classification response must be 0 or 1; row " +
                                    std::to_string(i) + " has " + std::to_string(y[i]));
      }
    }
  }
};

/// Index set of selected (or true) variables, 0-based, sorted ascending.
struct SupportSet {
  std::vector<std::size_t> indices;

  std::size_t sparsity() const { return indices.size(); }
  bool contains(std::size_t j) const;
  bool operator==(const SupportSet&) const = default;
};

inline bool SupportSet::contains(std::size_t j) const {
  for (std::size_t i : indices) {
    if (i == j) return true;
  }
  return false;
}

}  // namespace sdiscreen
