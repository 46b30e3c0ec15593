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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "specjacobi/config.hpp"
#include "specjacobi/distribution.hpp"
#include "specjacobi/rng.hpp"

namespace specjacobi {

// ---------------------------------------------------------------------------
// Model description
// ---------------------------------------------------------------------------

enum class ModelKind { HashLogit, GridNGram };

struct HashParams {
  std::size_t context_len = 2;
  double sharpness = 4.0;
  std::uint64_t model_seed = 0;
  friend bool operator==(const HashParams&, const HashParams&) = default;
};

enum class CorpusRecipe {
  /// Axis-aligned constant-color rectangles painted over a background token.
  Rectangles,
  /// Every cell is the background token.
  Constant,
};

struct CorpusSpec {
  CorpusRecipe recipe = CorpusRecipe::Rectangles;
  std::size_t grid_count = 64;
  std::size_t grid_height = 16;
  std::size_t grid_width = 16;
  std::size_t rects_per_grid = 4;
  TokenId background = 0;
  std::uint64_t corpus_seed = 0;
  friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

struct NGramParams {
  std::size_t order = 2;
  double smoothing = 0.01;
  CorpusSpec corpus;
  friend bool operator==(const NGramParams&, const NGramParams&) = default;
};

struct CfgParams {
  double weight = 3.0;
  /// Replaces the prompt when computing the unconditional branch.
  std::vector<TokenId> uncond_context;
  friend bool operator==(const CfgParams&, const CfgParams&) = default;
};

/// Which synthetic model backs a run. Only the block matching `kind` is used.
struct ModelSpec {
  ModelKind kind = ModelKind::HashLogit;
  std::size_t vocab_size = 16;
  HashParams hash;
  NGramParams ngram;
  std::optional<CfgParams> cfg;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Throws ConfigError on vocab_size < 2 or out-of-range parameters.
void validate(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Model contract
// ---------------------------------------------------------------------------

/// A categorical autoregressive model. Implementations are immutable after
/// construction and safe to share across threads.
class TokenModel {
 public:
  virtual ~TokenModel() = default;

  virtual std::size_t vocab_size() const noexcept = 0;

  /// Raw logits for the token at grid `position`, given `history`: every
  /// token that precedes it (conditioning context followed by generated
  /// tokens 0..position-1). `out` has vocab_size() entries.
  virtual void logits(std::span<const TokenId> history, std::size_t position,
                      std::span<double> out) const = 0;
};

/// Builds (and for GridNGram, trains) the model described by `spec`.
std::shared_ptr<const TokenModel> build_model(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Distribution shaping
// ---------------------------------------------------------------------------

/// uncond + weight * (cond - uncond).
Logits cfg_combine(std::span<const double> cond, std::span<const double> uncond, double weight);

/// softmax(logits / temperature), then keep the top_k most probable entries
/// (ties toward the lower id) and renormalize.
Distribution shape_distribution(std::span<const double> logits, double temperature,
                                std::size_t top_k);

/// Inverse-CDF draw with exactly one uniform, scanning ids in ascending order.
TokenId sample(const Distribution& dist, Rng& rng);
TokenId sample_with_uniform(const Distribution& dist, double uniform) noexcept;

/// Argmax, ties toward the lowest id.
TokenId greedy(const Distribution& dist) noexcept;

// ---------------------------------------------------------------------------
// Window evaluation
// ---------------------------------------------------------------------------

/// Distribution-shaping knobs pulled out of a DecodeConfig.
struct ShapingOptions {
  double temperature = 1.0;
  std::size_t top_k = 2000;
  std::optional<double> cfg_weight;
  std::vector<TokenId> prompt;
  std::vector<TokenId> uncond_context;

  /// Resolves guidance as: config weight if set, else model weight if the
  /// model spec carries a cfg block, else disabled.
  static ShapingOptions from(const ModelSpec& spec, const DecodeConfig& config);
  static ShapingOptions from(const DecodeConfig& config);
};

/// One parallel forward pass over a draft window, with NFE accounting.
///
/// Distribution s conditions on prompt ++ prefix ++ draft[0..s) and belongs
/// to grid position |prefix| + s. Each call charges exactly one NFE,
/// independent of the window length and of the second (unconditional)
/// evaluation that guidance performs internally.
class WindowEvaluator {
 public:
  WindowEvaluator(std::shared_ptr<const TokenModel> model, ShapingOptions options);

  /// Throws std::invalid_argument on an empty draft or out-of-vocabulary token.
  std::vector<Distribution> eval_window(std::span<const TokenId> prefix,
                                        std::span<const TokenId> draft);

  std::uint64_t nfe() const noexcept { return nfe_; }
  std::size_t vocab_size() const noexcept { return model_->vocab_size(); }
  const TokenModel& model() const noexcept { return *model_; }
  const ShapingOptions& options() const noexcept { return options_; }

 private:
  std::shared_ptr<const TokenModel> model_;
  ShapingOptions options_;
  std::vector<TokenId> cond_history_;
  std::vector<TokenId> uncond_history_;
  std::vector<double> cond_logits_;
  std::vector<double> uncond_logits_;
  std::uint64_t nfe_ = 0;
};

/// Stateless convenience form: builds the model and evaluates once.
std::vector<Distribution> eval_window(const ModelSpec& spec, std::span<const TokenId> prefix,
                                      std::span<const TokenId> draft, const DecodeConfig& config);

}  // namespace specjacobi
