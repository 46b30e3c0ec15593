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

#include "specjacobi/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "specjacobi/grid_ngram.hpp"
#include "specjacobi/hash_logit.hpp"

namespace specjacobi {

void validate(const ModelSpec& spec) {
  if (spec.vocab_size < 2) throw ConfigError("model: vocab_size must be >= 2");
  switch (spec.kind) {
    case ModelKind::HashLogit:
      if (spec.hash.context_len < 1) throw ConfigError("model: hash.context_len must be >= 1");
      if (!(spec.hash.sharpness >= 0.0) || !std::isfinite(spec.hash.sharpness))
        throw ConfigError("model: hash.sharpness must be finite and >= 0");
      break;
    case ModelKind::GridNGram: {
      const auto& ng = spec.ngram;
      if (ng.order < 2 || ng.order > 3) throw ConfigError("model: ngram.order must be 2 or 3");
      if (!(ng.smoothing > 0.0) || !std::isfinite(ng.smoothing))
        throw ConfigError("model: ngram.smoothing must be positive and finite");
      if (ng.corpus.grid_count == 0) throw ConfigError("model: empty corpus (grid_count = 0)");
      if (ng.corpus.grid_height == 0 || ng.corpus.grid_width == 0)
        throw ConfigError("model: corpus grid dimensions must be positive");
      if (ng.corpus.background >= spec.vocab_size)
        throw ConfigError("model: corpus background token outside vocabulary");
      break;
    }
  }
  if (spec.cfg) {
    if (!std::isfinite(spec.cfg->weight)) throw ConfigError("model: cfg.weight must be finite");
    for (TokenId t : spec.cfg->uncond_context)
      if (t >= spec.vocab_size) throw ConfigError("model: cfg.uncond_context token outside vocabulary");
  }
}

std::shared_ptr<const TokenModel> build_model(const ModelSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case ModelKind::HashLogit:
      return std::make_shared<const HashLogitModel>(spec.vocab_size, spec.hash);
    case ModelKind::GridNGram:
      return std::make_shared<const GridNGramModel>(GridNGramModel::train(spec));
  }
  throw ConfigError("model: unknown kind");
}

Logits cfg_combine(std::span<const double> cond, std::span<const double> uncond, double weight) {
  if (cond.size() != uncond.size()) throw std::invalid_argument("cfg_combine: length mismatch");
  Logits out(cond.size());
  for (std::size_t i = 0; i < cond.size(); ++i) out[i] = uncond[i] + weight * (cond[i] - uncond[i]);
  return out;
}

Distribution shape_distribution(std::span<const double> logits, double temperature,
                                std::size_t top_k) {
  if (logits.empty()) throw std::invalid_argument("shape_distribution: empty logits");
  if (!(temperature > 0.0)) throw std::invalid_argument("shape_distribution: temperature must be > 0");
  if (top_k < 1) throw std::invalid_argument("shape_distribution: top_k must be >= 1");

  const std::size_t vocab = logits.size();
  double peak = -INFINITY;
  for (double l : logits) {
    if (!std::isfinite(l)) throw std::invalid_argument("shape_distribution: non-finite logit");
    peak = std::max(peak, l / temperature);
  }
  std::vector<double> weights(vocab);
  for (std::size_t v = 0; v < vocab; ++v) weights[v] = std::exp(logits[v] / temperature - peak);

  if (top_k < vocab) {
    std::vector<std::size_t> order(vocab);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto by_prob = [&](std::size_t a, std::size_t b) {
      return weights[a] > weights[b] || (weights[a] == weights[b] && a < b);
    };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k), order.end(),
                     by_prob);
    for (std::size_t i = top_k; i < vocab; ++i) weights[order[i]] = 0.0;
  }
  return Distribution::normalized(std::move(weights));
}

TokenId sample_with_uniform(const Distribution& dist, double uniform) noexcept {
  const auto probs = dist.probs();
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t t = 0; t < probs.size(); ++t) {
    if (probs[t] <= 0.0) continue;
    last_nonzero = t;
    acc += probs[t];
    if (uniform < acc) return static_cast<TokenId>(t);
  }
  // Rounding left the CDF a hair below one.
  return static_cast<TokenId>(last_nonzero);
}

TokenId sample(const Distribution& dist, Rng& rng) { return sample_with_uniform(dist, rng.uniform()); }

TokenId greedy(const Distribution& dist) noexcept {
  const auto probs = dist.probs();
  std::size_t best = 0;
  for (std::size_t t = 1; t < probs.size(); ++t)
    if (probs[t] > probs[best]) best = t;
  return static_cast<TokenId>(best);
}

ShapingOptions ShapingOptions::from(const DecodeConfig& config) {
  ShapingOptions options;
  options.temperature = config.temperature;
  options.top_k = config.top_k;
  options.cfg_weight = config.cfg_weight;
  options.prompt = config.prompt;
  return options;
}

ShapingOptions ShapingOptions::from(const ModelSpec& spec, const DecodeConfig& config) {
  ShapingOptions options = from(config);
  if (spec.cfg) {
    if (!options.cfg_weight) options.cfg_weight = spec.cfg->weight;
    options.uncond_context = spec.cfg->uncond_context;
  }
  return options;
}

WindowEvaluator::WindowEvaluator(std::shared_ptr<const TokenModel> model, ShapingOptions options)
    : model_(std::move(model)), options_(std::move(options)) {
  if (!model_) throw std::invalid_argument("eval_window: null model");
  const std::size_t vocab = model_->vocab_size();
  for (TokenId t : options_.prompt)
    if (t >= vocab) throw std::invalid_argument("eval_window: prompt token outside vocabulary");
  for (TokenId t : options_.uncond_context)
    if (t >= vocab) throw std::invalid_argument("eval_window: uncond token outside vocabulary");
  cond_logits_.resize(vocab);
  uncond_logits_.resize(vocab);
}

std::vector<Distribution> WindowEvaluator::eval_window(std::span<const TokenId> prefix,
                                                       std::span<const TokenId> draft) {
  if (draft.empty()) throw std::invalid_argument("eval_window: empty draft window");
  const std::size_t vocab = model_->vocab_size();
  for (TokenId t : prefix)
    if (t >= vocab) throw std::invalid_argument("eval_window: prefix token outside vocabulary");
  for (TokenId t : draft)
    if (t >= vocab) throw std::invalid_argument("eval_window: draft token outside vocabulary");

  const bool guided = options_.cfg_weight.has_value();
  auto fill = [&](std::vector<TokenId>& history, const std::vector<TokenId>& head) {
    history.clear();
    history.insert(history.end(), head.begin(), head.end());
    history.insert(history.end(), prefix.begin(), prefix.end());
    history.insert(history.end(), draft.begin(), draft.end());
  };
  fill(cond_history_, options_.prompt);
  if (guided) fill(uncond_history_, options_.uncond_context);

  const std::size_t top_k = std::min(options_.top_k, vocab);
  std::vector<Distribution> out;
  out.reserve(draft.size());
  for (std::size_t s = 0; s < draft.size(); ++s) {
    const std::size_t position = prefix.size() + s;
    const std::span<const TokenId> cond(cond_history_.data(), options_.prompt.size() + position);
    model_->logits(cond, position, cond_logits_);
    if (guided) {
      const std::span<const TokenId> uncond(uncond_history_.data(),
                                            options_.uncond_context.size() + position);
      model_->logits(uncond, position, uncond_logits_);
      const Logits mixed = cfg_combine(cond_logits_, uncond_logits_, *options_.cfg_weight);
      out.push_back(shape_distribution(mixed, options_.temperature, top_k));
    } else {
      out.push_back(shape_distribution(cond_logits_, options_.temperature, top_k));
    }
  }
  ++nfe_;
  return out;
}

std::vector<Distribution> eval_window(const ModelSpec& spec, std::span<const TokenId> prefix,
                                      std::span<const TokenId> draft, const DecodeConfig& config) {
  WindowEvaluator evaluator(build_model(spec), ShapingOptions::from(spec, config));
  return evaluator.eval_window(prefix, draft);
}

}  // namespace specjacobi
