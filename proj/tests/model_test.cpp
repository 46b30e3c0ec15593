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

#include "specjacobi/hash_logit.hpp"
#include "specjacobi/model.hpp"

namespace specjacobi {
namespace {

ModelSpec hash_spec(std::size_t vocab, std::size_t context, double sharpness, std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = ModelKind::HashLogit;
  spec.vocab_size = vocab;
  spec.hash = {context, sharpness, seed};
  return spec;
}

void expect_valid(const Distribution& d) {
  double total = 0.0;
  for (double p : d.probs()) {
    EXPECT_GE(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

// ---------------------------------------------------------------------------
// Distribution
// ---------------------------------------------------------------------------

TEST(DistributionTest, RejectsInvalidMass) {
  EXPECT_THROW(Distribution(std::vector<double>{0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(Distribution(std::vector<double>{1.2, -0.2}), std::invalid_argument);
  EXPECT_THROW(Distribution(std::vector<double>{}), std::invalid_argument);
  EXPECT_NO_THROW(Distribution(std::vector<double>{0.25, 0.75}));
}

TEST(DistributionTest, Factories) {
  const auto u = Distribution::uniform(4);
  for (double p : u.probs()) EXPECT_DOUBLE_EQ(p, 0.25);
  const auto pm = Distribution::point_mass(5, 3);
  EXPECT_EQ(pm[3], 1.0);
  EXPECT_EQ(pm.support_size(), 1u);
  EXPECT_EQ(pm.entropy(), 0.0);
  EXPECT_THROW(Distribution::point_mass(3, 3), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// HashLogit
// ---------------------------------------------------------------------------

// Frozen from tests/reference/hash_reference.py.
TEST(HashLogitTest, MatchesReferenceEvaluator) {
  const auto spec = hash_spec(4, 2, 6.0, 7);
  const std::int64_t window[] = {-1, 1};
  const Logits logits = hash_logit_logits(spec, window, 0);
  ASSERT_EQ(logits.size(), 4u);
  EXPECT_DOUBLE_EQ(logits[0], 3.204402569850309);
  EXPECT_DOUBLE_EQ(logits[1], 4.172152869680723);
  EXPECT_DOUBLE_EQ(logits[2], 4.083636086918929);
  EXPECT_DOUBLE_EQ(logits[3], 0.9105821485174308);
}

TEST(HashLogitTest, EvalWindowMatchesReferenceEvaluator) {
  const auto spec = hash_spec(4, 2, 6.0, 7);
  DecodeConfig config;
  const std::vector<TokenId> prefix = {1, 2};
  const std::vector<TokenId> draft = {0, 3};
  const auto dists = eval_window(spec, prefix, draft, config);
  ASSERT_EQ(dists.size(), 2u);
  const double expected[2][4] = {
      {0.5229505562414203, 0.012752917903278664, 0.052118102439401626, 0.4121784234158994},
      {0.09150291360136689, 0.08866194484961262, 0.5372287823122481, 0.2826063592367724}};
  for (std::size_t s = 0; s < 2; ++s)
    for (TokenId v = 0; v < 4; ++v) EXPECT_NEAR(dists[s][v], expected[s][v], 1e-14) << s << "," << v;
}

TEST(HashLogitTest, ZeroSharpnessIsAllZero) {
  const auto spec = hash_spec(4, 2, 0.0, 99);
  const std::int64_t window[] = {3, 1};
  for (double l : hash_logit_logits(spec, window, 17)) EXPECT_EQ(l, 0.0);
}

TEST(HashLogitTest, ZeroSharpnessWindowIsUniform) {
  const auto spec = hash_spec(4, 2, 0.0, 5);
  DecodeConfig config;
  const std::vector<TokenId> prefix = {2, 2, 1};
  const std::vector<TokenId> draft = {0, 3, 1, 1};
  for (const auto& d : eval_window(spec, prefix, draft, config))
    for (double p : d.probs()) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(HashLogitTest, Deterministic) {
  const auto spec = hash_spec(16, 3, 5.0, 11);
  const std::int64_t window[] = {-1, 4, 9};
  EXPECT_EQ(hash_logit_logits(spec, window, 3), hash_logit_logits(spec, window, 3));
  EXPECT_NE(hash_logit_logits(spec, window, 3), hash_logit_logits(spec, window, 4));
}

TEST(HashLogitTest, ContextWindowPadsWithSentinel) {
  const std::vector<TokenId> history = {7};
  EXPECT_EQ(context_window(history, 3), (std::vector<std::int64_t>{-1, -1, 7}));
  const std::vector<TokenId> longer = {1, 2, 3, 4};
  EXPECT_EQ(context_window(longer, 2), (std::vector<std::int64_t>{3, 4}));
}

TEST(HashLogitTest, RejectsWrongKind) {
  ModelSpec spec;
  spec.kind = ModelKind::GridNGram;
  const std::int64_t window[] = {0};
  EXPECT_THROW(hash_logit_logits(spec, window, 0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Shaping
// ---------------------------------------------------------------------------

TEST(CfgCombineTest, Examples) {
  const std::vector<double> cond = {1, 3};
  const std::vector<double> uncond = {0, 1};
  EXPECT_EQ(cfg_combine(cond, uncond, 1.0), (Logits{1, 3}));
  EXPECT_EQ(cfg_combine(cond, uncond, 0.0), (Logits{0, 1}));
  EXPECT_EQ(cfg_combine(cond, uncond, 3.0), (Logits{3, 7}));
  const std::vector<double> shorter = {0};
  EXPECT_THROW(cfg_combine(cond, shorter, 1.0), std::invalid_argument);
}

TEST(ShapeDistributionTest, TopTwoOfThree) {
  const std::vector<double> logits = {0.0, std::log(2.0), std::log(4.0)};
  const auto full = shape_distribution(logits, 1.0, 3);
  EXPECT_NEAR(full[0], 1.0 / 7, 1e-15);
  EXPECT_NEAR(full[1], 2.0 / 7, 1e-15);
  EXPECT_NEAR(full[2], 4.0 / 7, 1e-15);
  const auto top2 = shape_distribution(logits, 1.0, 2);
  EXPECT_EQ(top2[0], 0.0);
  EXPECT_NEAR(top2[1], 1.0 / 3, 1e-15);
  EXPECT_NEAR(top2[2], 2.0 / 3, 1e-15);
}

TEST(ShapeDistributionTest, TopOneIsArgmaxWithLowIdTies) {
  const std::vector<double> logits = {0.5, 2.0, 2.0, -1.0};
  const auto d = shape_distribution(logits, 0.7, 1);
  EXPECT_EQ(d[1], 1.0);
  EXPECT_EQ(d.entropy(), 0.0);
}

TEST(ShapeDistributionTest, TopKTiesKeepLowerIds) {
  const std::vector<double> logits = {1.0, 1.0, 1.0, 1.0};
  const auto d = shape_distribution(logits, 1.0, 2);
  EXPECT_DOUBLE_EQ(d[0], 0.5);
  EXPECT_DOUBLE_EQ(d[1], 0.5);
  EXPECT_EQ(d[2], 0.0);
  EXPECT_EQ(d[3], 0.0);
}

TEST(ShapeDistributionTest, RejectsBadArguments) {
  const std::vector<double> logits = {0.0, 1.0};
  EXPECT_THROW(shape_distribution(logits, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(shape_distribution(logits, 1.0, 0), std::invalid_argument);
  const std::vector<double> bad = {0.0, INFINITY};
  EXPECT_THROW(shape_distribution(bad, 1.0, 2), std::invalid_argument);
}

TEST(ShapeDistributionTest, EntropyNonIncreasingAsKShrinks) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logits(12);
    for (auto& l : logits) l = 4.0 * rng.uniform() - 2.0;
    double previous = INFINITY;
    for (std::size_t k = logits.size(); k >= 1; --k) {
      const auto d = shape_distribution(logits, 1.3, k);
      expect_valid(d);
      EXPECT_LE(d.support_size(), k);
      EXPECT_LE(d.entropy(), previous + 1e-12);
      previous = d.entropy();
    }
    EXPECT_EQ(previous, 0.0);
  }
}

TEST(ShapeDistributionTest, GreedyInvariantUnderTopK) {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> logits(9);
    for (auto& l : logits) l = 6.0 * rng.uniform();
    const double temperature = 0.25 + 2.0 * rng.uniform();
    EXPECT_EQ(greedy(shape_distribution(logits, temperature, 1)),
              greedy(shape_distribution(logits, temperature, logits.size())));
  }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

TEST(SampleTest, PointMass) {
  const auto d = Distribution::point_mass(6, 3);
  for (double u : {0.0, 0.3, 0.999999}) EXPECT_EQ(sample_with_uniform(d, u), 3u);
}

TEST(SampleTest, InverseCdfArithmetic) {
  const auto d = Distribution::uniform(4);
  EXPECT_EQ(sample_with_uniform(d, 0.6), 2u);
  EXPECT_EQ(sample_with_uniform(d, 0.0), 0u);
  EXPECT_EQ(sample_with_uniform(d, 0.25), 1u);
}

TEST(SampleTest, ConsumesExactlyOneUniform) {
  Rng rng(1);
  const auto d = Distribution::uniform(5);
  sample(d, rng);
  EXPECT_EQ(rng.consumed(), 1u);
  sample(Distribution::point_mass(5, 0), rng);
  EXPECT_EQ(rng.consumed(), 2u);
}

TEST(SampleTest, EmpiricalFrequenciesWithinThreeSigma) {
  const Distribution d(std::vector<double>{0.1, 0.2, 0.7});
  Rng rng(2024);
  constexpr int kDraws = 1'000'000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[sample(d, rng)];
  for (TokenId t = 0; t < 3; ++t) {
    const double p = d[t];
    const double sigma = std::sqrt(p * (1 - p) / kDraws);
    EXPECT_NEAR(static_cast<double>(counts[t]) / kDraws, p, 3 * sigma) << t;
  }
}

TEST(GreedyTest, Examples) {
  EXPECT_EQ(greedy(Distribution(std::vector<double>{0.2, 0.5, 0.3})), 1u);
  EXPECT_EQ(greedy(Distribution(std::vector<double>{0.5, 0.5})), 0u);
}

// ---------------------------------------------------------------------------
// eval_window
// ---------------------------------------------------------------------------

TEST(EvalWindowTest, WindowOfOneIsAutoregressive) {
  const auto spec = hash_spec(8, 2, 3.0, 1);
  DecodeConfig config;
  config.top_k = 5;
  config.temperature = 0.8;
  const std::vector<TokenId> prefix = {3, 1, 4};
  const std::vector<TokenId> draft = {6};
  const auto d = eval_window(spec, prefix, draft, config);
  ASSERT_EQ(d.size(), 1u);

  HashLogitModel model(8, spec.hash);
  Logits raw(8);
  model.logits(prefix, prefix.size(), raw);
  EXPECT_EQ(d[0], shape_distribution(raw, 0.8, 5));
}

TEST(EvalWindowTest, CausalConsistency) {
  const auto spec = hash_spec(6, 3, 4.0, 8);
  DecodeConfig config;
  config.top_k = 4;
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TokenId> prefix(static_cast<std::size_t>(rng.uniform() * 6));
    std::vector<TokenId> draft(1 + static_cast<std::size_t>(rng.uniform() * 8));
    for (auto& t : prefix) t = static_cast<TokenId>(rng.uniform() * 6);
    for (auto& t : draft) t = static_cast<TokenId>(rng.uniform() * 6);
    const auto full = eval_window(spec, prefix, draft, config);
    for (std::size_t split = 1; split <= draft.size(); ++split) {
      const std::vector<TokenId> head(draft.begin(), draft.begin() + static_cast<std::ptrdiff_t>(split));
      const auto part = eval_window(spec, prefix, head, config);
      for (std::size_t s = 0; s < split; ++s) EXPECT_EQ(full[s], part[s]);
    }
  }
}

TEST(EvalWindowTest, DeterministicAndValid) {
  const auto spec = hash_spec(10, 2, 7.0, 21);
  DecodeConfig config;
  const std::vector<TokenId> prefix = {9, 0};
  const std::vector<TokenId> draft = {1, 2, 3, 4, 5};
  const auto a = eval_window(spec, prefix, draft, config);
  const auto b = eval_window(spec, prefix, draft, config);
  EXPECT_EQ(a, b);
  for (const auto& d : a) expect_valid(d);
}

TEST(EvalWindowTest, ChargesOneNfePerCall) {
  const auto spec = hash_spec(5, 2, 2.0, 0);
  DecodeConfig config;
  config.cfg_weight = 3.0;
  config.prompt = {1, 2};
  WindowEvaluator evaluator(build_model(spec), ShapingOptions::from(spec, config));
  const std::vector<TokenId> prefix = {};
  evaluator.eval_window(prefix, std::vector<TokenId>{0});
  EXPECT_EQ(evaluator.nfe(), 1u);
  evaluator.eval_window(prefix, std::vector<TokenId>(17, 1));
  EXPECT_EQ(evaluator.nfe(), 2u);
}

TEST(EvalWindowTest, GuidanceCombinesCondAndUncondBranches) {
  auto spec = hash_spec(5, 2, 2.0, 4);
  spec.cfg = CfgParams{3.0, {4}};
  DecodeConfig config;
  config.prompt = {1, 2};
  const std::vector<TokenId> prefix = {0};
  const std::vector<TokenId> draft = {3};
  const auto d = eval_window(spec, prefix, draft, config);

  HashLogitModel model(5, spec.hash);
  Logits cond(5), uncond(5);
  model.logits(std::vector<TokenId>{1, 2, 0}, 1, cond);
  model.logits(std::vector<TokenId>{4, 0}, 1, uncond);
  EXPECT_EQ(d[0], shape_distribution(cfg_combine(cond, uncond, 3.0), 1.0, 5));

  // The decode config weight overrides the ModelSpec weight.
  config.cfg_weight = 1.0;
  EXPECT_EQ(eval_window(spec, prefix, draft, config)[0], shape_distribution(cond, 1.0, 5));
}

TEST(EvalWindowTest, RejectsEmptyDraftAndOutOfRangeTokens) {
  const auto spec = hash_spec(4, 2, 1.0, 0);
  DecodeConfig config;
  const std::vector<TokenId> prefix = {1};
  EXPECT_THROW(eval_window(spec, prefix, std::vector<TokenId>{}, config), std::invalid_argument);
  EXPECT_THROW(eval_window(spec, prefix, std::vector<TokenId>{4}, config), std::invalid_argument);
  EXPECT_THROW(eval_window(spec, std::vector<TokenId>{9}, std::vector<TokenId>{0}, config),
               std::invalid_argument);
}

TEST(ModelSpecTest, ValidationErrors) {
  auto spec = hash_spec(1, 2, 1.0, 0);
  EXPECT_THROW(validate(spec), ConfigError);
  spec = hash_spec(4, 0, 1.0, 0);
  EXPECT_THROW(validate(spec), ConfigError);
  spec = hash_spec(4, 2, -1.0, 0);
  EXPECT_THROW(validate(spec), ConfigError);
}

}  // namespace
}  // namespace specjacobi
