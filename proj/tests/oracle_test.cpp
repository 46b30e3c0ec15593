// Copyright 2026 The specjacobi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "specjacobi/oracle.hpp"

namespace specjacobi {
namespace {

TEST(OneStepMarginalTest, HandExample) {
  const Distribution ref(std::vector<double>{0.5, 0.5});
  const Distribution fresh(std::vector<double>{0.9, 0.1});
  const auto m = one_step_marginal(ref, fresh);
  EXPECT_NEAR(m[0], 0.9, 1e-15);
  EXPECT_NEAR(m[1], 0.1, 1e-15);
}

TEST(OneStepMarginalTest, DisjointSupports) {
  const auto m = one_step_marginal(Distribution::point_mass(3, 0), Distribution::point_mass(3, 2));
  EXPECT_EQ(m, Distribution::point_mass(3, 2));
}

TEST(OneStepMarginalTest, IdentityOverRandomPairs) {
  const std::size_t vocabs[] = {2, 3, 8, 64};
  EXPECT_LT(one_step_identity_max_error(vocabs, 2000, 1), 1e-12);
}

TEST(OneStepMarginalTest, SizeMismatchThrows) {
  EXPECT_THROW(one_step_marginal(Distribution::uniform(2), Distribution::uniform(3)), std::invalid_argument);
}

TEST(SequenceDistributionTest, IndexingIsBaseV) {
  SequenceDistribution d(3, 2);
  EXPECT_EQ(d.support_capacity(), 9u);
  const std::vector<TokenId> seq = {2, 1};
  EXPECT_EQ(d.index_of(seq), 7u);
  EXPECT_EQ(d.sequence_at(7), seq);
  EXPECT_THROW(d.index_of(std::vector<TokenId>{3, 0}), std::invalid_argument);
}

TEST(SequenceDistributionTest, EnumerationGuard) {
  EXPECT_THROW(SequenceDistribution(64, 4), std::invalid_argument);
  EXPECT_NO_THROW(SequenceDistribution(10, 6));
}

TEST(TvDistanceTest, Examples) {
  SequenceDistribution a(2, 1), b(2, 1);
  a.at(0) = 1.0;
  b.at(0) = 1.0;
  EXPECT_EQ(tv_distance(a, b), 0.0);
  b.at(0) = 0.0;
  b.at(1) = 1.0;
  EXPECT_EQ(tv_distance(a, b), 1.0);
  b.at(0) = 0.5;
  b.at(1) = 0.5;
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 0.5);
  EXPECT_THROW(tv_distance(a, SequenceDistribution(2, 2)), std::invalid_argument);
}

TEST(EnumerateArTest, FlatModelIsUniform) {
  ModelSpec spec;
  spec.vocab_size = 3;
  spec.hash.sharpness = 0.0;
  DecodeConfig config;
  config.mode = DecodeMode::AR;
  config.grid = {1, 2};
  const auto exact = enumerate_ar_distribution(load_model(spec), config);
  for (double p : exact.probs()) EXPECT_NEAR(p, 1.0 / 9, 1e-15);
}

TEST(EnumerateArTest, SingleTokenMatchesShapedDistribution) {
  ModelSpec spec;
  spec.vocab_size = 5;
  spec.hash = {2, 4.0, 3};
  DecodeConfig config;
  config.grid = {1, 1};
  config.top_k = 3;
  const auto exact = enumerate_ar_distribution(load_model(spec), config);
  const auto d = eval_window(spec, std::vector<TokenId>{}, std::vector<TokenId>{0}, config)[0];
  for (TokenId v = 0; v < 5; ++v) EXPECT_DOUBLE_EQ(exact.at(v), d[v]);
  EXPECT_NEAR(exact.total(), 1.0, 1e-12);
}

TEST(EnumerateArTest, MatchesArMonteCarlo) {
  const auto loaded = load_model(oracle_model_spec());
  auto config = oracle_decode_config(DecodeMode::AR);
  config.grid = {1, 3};
  const auto exact = enumerate_ar_distribution(loaded, config);
  constexpr std::uint64_t kTrials = 200'000;
  const auto empirical = mc_decode_distribution(loaded, config, kTrials, 1);
  for (std::size_t i = 0; i < exact.support_capacity(); ++i) {
    const double p = exact.at(i);
    EXPECT_NEAR(empirical.at(i), p, 4 * std::sqrt(p * (1 - p) / kTrials) + 1e-12) << i;
  }
}

TEST(MonteCarloTest, SingleTrialIsPointMass) {
  const auto loaded = load_model(oracle_model_spec());
  const auto d = mc_decode_distribution(loaded, oracle_decode_config(DecodeMode::SJD), 1, 1);
  std::size_t nonzero = 0;
  for (double p : d.probs()) nonzero += p > 0;
  EXPECT_EQ(nonzero, 1u);
  EXPECT_DOUBLE_EQ(d.total(), 1.0);
}

TEST(MonteCarloTest, IndependentOfThreadCount) {
  const auto loaded = load_model(oracle_model_spec());
  const auto config = oracle_decode_config(DecodeMode::SJDPP);
  const auto one = mc_decode_distribution(loaded, config, 5000, 1);
  const auto three = mc_decode_distribution(loaded, config, 5000, 3);
  EXPECT_EQ(tv_distance(one, three), 0.0);
}

TEST(MonteCarloTest, SjdWindowOneIsLossless) {
  const auto loaded = load_model(oracle_model_spec());
  auto config = oracle_decode_config(DecodeMode::SJD);
  config.window = 1;
  config.grid = {1, 3};
  const auto exact = enumerate_ar_distribution(loaded, config);
  const auto empirical = mc_decode_distribution(loaded, config, 100'000, 1);
  EXPECT_LT(tv_distance(exact, empirical), 0.02);
}

}  // namespace
}  // namespace specjacobi
