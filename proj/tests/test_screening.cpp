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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sdiscreen/numeric.hpp"
#include "sdiscreen/rng.hpp"
#include "sdiscreen/screening.hpp"
#include "sdiscreen/stump.hpp"

namespace sdiscreen {
namespace {

using V = std::vector<double>;

Dataset make(std::vector<V> cols, V y) {
  Dataset d;
  d.predictors = std::move(cols);
  d.response = std::move(y);
  d.validate();
  return d;
}

Dataset random_dataset(Stream& rng, std::size_t n, std::size_t p) {
  Dataset d;
  d.predictors.assign(p, V(n));
  d.response.resize(n);
  for (auto& col : d.predictors) {
    for (auto& v : col) v = rng.uniform() < 0.2 ? std::floor(3 * rng.uniform()) : rng.normal();
  }
  for (std::size_t i = 0; i < n; ++i) {
    d.response[i] = std::sin(3 * d.predictors[0][i]) + 0.5 * d.predictors[p - 1][i] + rng.normal();
  }
  d.validate();
  return d;
}

TEST(RankSdi, SeparatingVariableRanksFirst) {
  const auto d = make({{1, 2, 3, 4}, {4, 1, 3, 2}}, {0, 0, 1, 1});
  const auto r = rank_sdi(d);
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(r.scores[0], 0.25);
  // Best split of the scrambled column: boundary after x=1 or x=3, each 1/12.
  EXPECT_NEAR(r.scores[1], 1.0 / 12.0, 1e-15);
  EXPECT_EQ(r.method, RankMethod::SDI);
}

TEST(RankSdi, ConstantResponseGivesZeroScoresInIndexOrder) {
  const auto d = make({{3, 1, 2}, {1, 2, 3}, {5, 5, 6}}, {2, 2, 2});
  const auto r = rank_sdi(d);
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1, 2}));
  for (double s : r.scores) EXPECT_EQ(s, 0.0);
}

TEST(RankSdi, SingleVariable) {
  const auto r = rank_sdi(make({{0.3, -1, 2}}, {1, 5, 2}));
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0}));
}

TEST(RankSdi, ConstantColumnRanksLast) {
  const auto r = rank_sdi(make({{7, 7, 7, 7}, {1, 2, 3, 4}}, {0, 1, 0, 2}));
  EXPECT_EQ(r.order.back(), 0u);
  EXPECT_EQ(r.scores[0], 0.0);
}

TEST(RankSdi, EmptyDatasetThrows) {
  Dataset d;
  EXPECT_THROW(rank_sdi(d), std::invalid_argument);
  Dataset tiny;
  tiny.predictors = {{1.0}};
  tiny.response = {1.0};
  EXPECT_THROW(rank_sdi(tiny), std::invalid_argument);
}

TEST(RankSis, PerfectLinear) {
  const auto r = rank_sis(make({{1, 2, 3, 4}}, {2, 4, 6, 8}));
  EXPECT_NEAR(r.scores[0], 1.0, 1e-15);
}

TEST(RankSis, StepResponse) {
  // Direct Pearson: cov = 2/4, var_x = 5/4, var_y = 1/4 -> rho = 2/sqrt(5).
  const auto r = rank_sis(make({{1, 2, 3, 4}}, {0, 0, 1, 1}));
  EXPECT_NEAR(r.scores[0], 2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(r.scores[0] * r.scores[0], 0.8, 1e-15);
}

TEST(RankSis, ConstantColumnScoresZeroAndConstantResponseThrows) {
  const auto r = rank_sis(make({{7, 7, 7}, {1, 2, 3}}, {1, 3, 2}));
  EXPECT_EQ(r.scores[0], 0.0);
  EXPECT_THROW(rank_sis(make({{1, 2, 3}}, {1, 1, 1})), std::domain_error);
}

TEST(RankSis, IndependentNoiseIsSmall) {
  Stream rng(derive_key(5, 5));
  const std::size_t n = 4000;
  Dataset d;
  d.predictors.assign(20, V(n));
  d.response.resize(n);
  for (auto& col : d.predictors) for (auto& v : col) v = rng.normal();
  for (auto& v : d.response) v = rng.normal();
  d.validate();
  const auto r = rank_sis(d);
  for (double s : r.scores) EXPECT_LT(s, 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(TopK, PrefixOfOrder) {
  Ranking r;
  r.order = {2, 0, 1};
  r.scores = {0.5, 0.1, 0.9};
  EXPECT_EQ(top_k(r, 2).indices, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(top_k(r, 3).indices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(top_k(r, 0), std::out_of_range);
  EXPECT_THROW(top_k(r, 4), std::out_of_range);
}

TEST(TopK, FollowsSdiRanking) {
  const auto d = make({{1, 2, 3, 4}, {4, 1, 3, 2}}, {0, 0, 1, 1});
  EXPECT_EQ(top_k(rank_sdi(d), 1).indices, (std::vector<std::size_t>{0}));
}

TEST(RankSdiClassification, MatchesRegressionOnBinaryLabels) {
  auto d = make({{1, 2, 3, 4}, {4, 1, 3, 2}}, {0, 0, 1, 1});
  const auto reg = rank_sdi(d);
  d.mode = ResponseMode::BinaryClassification;
  const auto cls = rank_sdi_classification(d);
  EXPECT_EQ(cls.order, reg.order);
  EXPECT_EQ(cls.scores, reg.scores);
}

TEST(RankSdiClassification, AllEqualLabelsScoreZero) {
  const auto r = rank_sdi_classification(make({{1, 2, 3}, {3, 1, 2}}, {1, 1, 1}));
  for (double s : r.scores) EXPECT_EQ(s, 0.0);
}

TEST(RankSdiClassification, RejectsNonBinary) {
  EXPECT_THROW(rank_sdi_classification(make({{1, 2, 3}}, {0, 1, 2})), std::invalid_argument);
}

TEST(RankSdiClassification, LogisticSignalRanksFirst) {
  // x1 drives P(y = 1) = 1 / (1 + exp(-3 x1)); x2..x20 are noise.
  int first = 0;
  for (int rep = 0; rep < 50; ++rep) {
    Stream rng(derive_key(99, rep));
    const std::size_t n = 300, p = 20;
    Dataset d;
    d.mode = ResponseMode::BinaryClassification;
    d.predictors.assign(p, V(n));
    d.response.resize(n);
    for (auto& col : d.predictors) for (auto& v : col) v = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      const double prob = 1.0 / (1.0 + std::exp(-3.0 * d.predictors[0][i]));
      d.response[i] = rng.uniform() < prob ? 1.0 : 0.0;
    }
    d.validate();
    first += rank_sdi_classification(d).order[0] == 0 ? 1 : 0;
  }
  EXPECT_GE(first, 45);
}

TEST(ScreeningProperties, ColumnPermutationEquivariance) {
  Stream rng(derive_key(1, 2));
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_dataset(rng, 60, 8);
    const auto perm = random_permutation(d.p(), rng);
    Dataset shuffled = d;
    for (std::size_t j = 0; j < d.p(); ++j) shuffled.predictors[j] = d.predictors[perm[j]];
    const auto a = rank_sdi(d);
    const auto b = rank_sdi(shuffled);
    for (std::size_t j = 0; j < d.p(); ++j) ASSERT_EQ(b.scores[j], a.scores[perm[j]]);
  }
}

TEST(ScreeningProperties, RowOrderInvariance) {
  Stream rng(derive_key(3, 4));
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_dataset(rng, 50, 6);
    const auto perm = random_permutation(d.n(), rng);
    Dataset shuffled = d;
    for (std::size_t i = 0; i < d.n(); ++i) {
      shuffled.response[i] = d.response[perm[i]];
      for (std::size_t j = 0; j < d.p(); ++j) shuffled.predictors[j][i] = d.predictors[j][perm[i]];
    }
    const auto a = rank_sdi(d);
    const auto b = rank_sdi(shuffled);
    for (std::size_t j = 0; j < d.p(); ++j) {
      ASSERT_NEAR(a.scores[j], b.scores[j], 1e-13 * std::max(1.0, a.scores[j]));
    }
  }
}

TEST(ScreeningProperties, MonotoneTransformOfOneColumn) {
  Stream rng(derive_key(5, 6));
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_dataset(rng, 70, 5);
    Dataset t = d;
    const std::size_t j = rng.below(d.p());
    for (auto& v : t.predictors[j]) v = std::atan(v) * 3 + v * v * v;
    const auto a = rank_sdi(d);
    const auto b = rank_sdi(t);
    ASSERT_EQ(a.order, b.order);
    ASSERT_NEAR(a.scores[j], b.scores[j], 1e-12 * std::max(1.0, a.scores[j]));
  }
}

TEST(ScreeningProperties, SdiBoundedBelowBySis) {
  Stream rng(derive_key(7, 8));
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_dataset(rng, 1 + 2 + rng.below(150), 6);
    const auto sdi = rank_sdi(d);
    const auto sis = rank_sis(d);
    const double var = plugin_variance(d.response);
    const double bound_factor = 1.0 / (std::log(2.0 * d.n()) + 1.0);
    for (std::size_t j = 0; j < d.p(); ++j) {
      ASSERT_GE(sdi.scores[j] * (1 + 1e-12), var * sis.scores[j] * sis.scores[j] * bound_factor);
    }
  }
}

TEST(ScreeningProperties, ParallelMatchesSerial) {
  Stream rng(derive_key(9, 10));
  const auto d = random_dataset(rng, 500, 40);
  const auto a = rank_sdi(d, 1);
  const auto b = rank_sdi(d, 4);
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(rank_sis(d, 1).scores, rank_sis(d, 3).scores);
}

TEST(ScreeningProperties, RankingInvariants) {
  Stream rng(derive_key(11, 12));
  const auto d = random_dataset(rng, 200, 30);
  for (const auto& r : {rank_sdi(d), rank_sis(d)}) {
    std::vector<std::size_t> sorted = r.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) ASSERT_EQ(sorted[k], k);
    for (std::size_t k = 1; k < r.order.size(); ++k) {
      ASSERT_GE(r.scores[r.order[k - 1]], r.scores[r.order[k]]);
    }
    for (double s : r.scores) {
      ASSERT_GE(s, 0.0);
      if (r.method == RankMethod::SIS) {
        ASSERT_LE(s, 1.0);
      }
    }
  }
}

}  // namespace
}  // namespace sdiscreen
