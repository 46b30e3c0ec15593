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

#include "specjacobi/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specjacobi/spatial_init.hpp"

namespace specjacobi {
namespace {

constexpr double kResidualFloor = 1e-12;

std::size_t cache_capacity(const DecodeConfig& config) {
  return config.grid.width + config.window + 1;
}

void finalize(RunResult& result, PrefixState& state, const WindowEvaluator& evaluator,
              std::uint64_t steps) {
  result.tokens = std::move(state.committed);
  result.committed_logprobs = std::move(state.committed_logprobs);
  result.steps = steps;
  result.model_nfe = evaluator.nfe();
  result.step_compression =
      steps == 0 ? 0.0 : static_cast<double>(result.tokens.size()) / static_cast<double>(steps);
  const auto& lp = result.committed_logprobs;
  if (!lp.empty()) {
    double sum = 0.0;
    for (double x : lp) sum += x;
    const double mean = sum / static_cast<double>(lp.size());
    double sq = 0.0;
    for (double x : lp) sq += (x - mean) * (x - mean);
    result.logprob_mean = mean;
    result.logprob_std = std::sqrt(sq / static_cast<double>(lp.size()));
  }
}

std::vector<TokenId> tokens_of(std::span<const DraftSlot> window) {
  std::vector<TokenId> out;
  out.reserve(window.size());
  for (const auto& slot : window) out.push_back(slot.token);
  return out;
}

// Extends `window` to `length` slots with fresh drafts; returns how many.
std::size_t refill(std::vector<DraftSlot>& window, std::size_t length, const PrefixState& state,
                   const DecodeConfig& config, std::size_t vocab, Rng& rng) {
  std::size_t fresh = 0;
  while (window.size() < length) {
    const std::size_t position = state.size() + window.size();
    window.push_back(init_token(config.init, position, state, window, config.grid, vocab, rng).slot);
    ++fresh;
  }
  return fresh;
}

}  // namespace

LoadedModel load_model(const ModelSpec& spec) { return {spec, build_model(spec)}; }

VerifyOutcome verify_window(std::span<const DraftSlot> drafts, std::span<const Distribution> new_dists,
                            Rng& rng) {
  if (drafts.size() != new_dists.size()) throw std::invalid_argument("verify_window: length mismatch");
  VerifyOutcome outcome;
  for (std::size_t s = 0; s < drafts.size(); ++s) {
    const TokenId x = drafts[s].token;
    const double r = rng.uniform();
    ++outcome.uniforms_consumed;
    const double ratio = safe_ratio(new_dists[s][x], drafts[s].ref_dist[x]);
    if (!(r < std::min(1.0, ratio))) {
      outcome.first_rejection = s;
      break;
    }
  }
  return outcome;
}

TokenId residual_resample(const Distribution& d_new, const Distribution& d_ref, Rng& rng) {
  if (d_new.size() != d_ref.size()) throw std::invalid_argument("residual_resample: size mismatch");
  std::vector<double> residual(d_new.size());
  double mass = 0.0;
  for (std::size_t v = 0; v < residual.size(); ++v) {
    const auto t = static_cast<TokenId>(v);
    residual[v] = std::max(0.0, d_new[t] - d_ref[t]);
    mass += residual[v];
  }
  if (mass < kResidualFloor) return sample(d_new, rng);
  return sample(Distribution::normalized(std::move(residual)), rng);
}

RefineOutcome refine_or_reuse(const DraftSlot& slot, const Distribution& d_s, DecodeMode mode,
                              double tau, Rng& rng) {
  RefineOutcome out;
  out.confidence = safe_ratio(d_s[slot.token], slot.ref_dist[slot.token]);
  switch (mode) {
    case DecodeMode::SJD:
      out.token = sample(d_s, rng);
      return out;
    case DecodeMode::SJDPP:
      if (out.confidence > tau) {
        out.token = slot.token;
        out.reused = true;
      } else {
        out.token = sample(d_s, rng);
      }
      return out;
    case DecodeMode::AR:
    case DecodeMode::Jacobi:
      break;
  }
  throw std::invalid_argument("refine_or_reuse: mode must be sjd or sjdpp");
}

RunResult decode_ar(WindowEvaluator& evaluator, const DecodeConfig& config, Rng& rng) {
  const std::size_t total = config.total_tokens();
  PrefixState state(cache_capacity(config));
  RunResult result;
  std::uint64_t steps = 0;
  const TokenId placeholder[1] = {0};
  for (std::size_t j = 0; state.size() < total; ++j) {
    // d_0 conditions on the prefix only; the placeholder draft is never read.
    const auto dists = evaluator.eval_window(state.committed, placeholder);
    ++steps;
    state.commit(sample(dists[0], rng), dists[0]);
    IterationRecord rec;
    rec.j = j;
    rec.accepted_count = 1;
    rec.nfe_so_far = steps;
    rec.n_so_far = state.size();
    result.trace.push_back(std::move(rec));
  }
  finalize(result, state, evaluator, steps);
  return result;
}

RunResult decode_jacobi(WindowEvaluator& evaluator, const DecodeConfig& config, Rng& rng) {
  const std::size_t total = config.total_tokens();
  const std::size_t vocab = evaluator.vocab_size();
  PrefixState state(cache_capacity(config));
  std::vector<DraftSlot> window;
  RunResult result;
  std::uint64_t steps = 0;

  for (std::size_t j = 0; state.size() < total; ++j) {
    const std::size_t length = std::min(config.window, total - state.size());
    IterationRecord rec;
    rec.j = j;
    rec.fresh_count = refill(window, length, state, config, vocab, rng);

    const auto dists = evaluator.eval_window(state.committed, tokens_of(window));
    ++steps;

    std::size_t matched = 0;
    while (matched < length && window[matched].token == greedy(dists[matched])) ++matched;
    for (std::size_t s = 0; s < matched; ++s) state.commit(window[s].token, dists[s]);
    rec.accepted_count = matched;

    std::vector<DraftSlot> next;
    if (matched < length) {
      // Greedy output right after the matched prefix conditions only on
      // verified tokens, so it is final.
      state.commit(greedy(dists[matched]), dists[matched]);
      rec.committed_by_resample = 1;
      for (std::size_t s = matched + 1; s < length; ++s) {
        next.push_back(DraftSlot{greedy(dists[s]), dists[s], true});
        ++rec.resampled_count;
      }
    }
    window = std::move(next);
    rec.nfe_so_far = steps;
    rec.n_so_far = state.size();
    result.trace.push_back(std::move(rec));
  }
  finalize(result, state, evaluator, steps);
  return result;
}

RunResult decode_sjd(WindowEvaluator& evaluator, const DecodeConfig& config, Rng& rng) {
  if (config.mode != DecodeMode::SJD && config.mode != DecodeMode::SJDPP)
    throw std::invalid_argument("decode_sjd: mode must be sjd or sjdpp");
  const std::size_t total = config.total_tokens();
  const std::size_t vocab = evaluator.vocab_size();
  PrefixState state(cache_capacity(config));
  std::vector<DraftSlot> window;
  RunResult result;
  std::uint64_t steps = 0;

  for (std::size_t j = 0; state.size() < total; ++j) {
    // The window shrinks near the budget instead of over-generating.
    const std::size_t length = std::min(config.window, total - state.size());
    IterationRecord rec;
    rec.j = j;
    rec.fresh_count = refill(window, length, state, config, vocab, rng);

    const auto dists = evaluator.eval_window(state.committed, tokens_of(window));
    ++steps;

    const VerifyOutcome verdict = verify_window(window, dists, rng);
    const std::size_t accepted = verdict.accepted(length);
    for (std::size_t s = 0; s < accepted; ++s) state.commit(window[s].token, dists[s]);
    rec.accepted_count = accepted;

    std::vector<DraftSlot> next;
    if (verdict.first_rejection) {
      const std::size_t rejected = *verdict.first_rejection;
      const TokenId token = residual_resample(dists[rejected], window[rejected].ref_dist, rng);
      state.commit(token, dists[rejected]);
      rec.committed_by_resample = 1;

      if (config.refine) {
        next.reserve(length - rejected - 1);
        for (std::size_t s = rejected + 1; s < length; ++s) {
          const RefineOutcome r =
              refine_or_reuse(window[s], dists[s], config.mode, config.reuse_threshold, rng);
          rec.confidences.push_back(r.confidence);
          if (r.reused) {
            ++rec.reused_count;
          } else {
            ++rec.resampled_count;
          }
          next.push_back(DraftSlot{r.token, dists[s], true});
        }
      }
    }
    window = std::move(next);
    rec.nfe_so_far = steps;
    rec.n_so_far = state.size();
    result.trace.push_back(std::move(rec));
  }
  finalize(result, state, evaluator, steps);
  return result;
}

RunResult decode(const LoadedModel& model, const DecodeConfig& config) {
  validate(model.spec);
  validate(config, model.spec.vocab_size);
  if (!model.model || model.model->vocab_size() != model.spec.vocab_size)
    throw ConfigError("decode: model vocabulary does not match its spec");
  WindowEvaluator evaluator(model.model, ShapingOptions::from(model.spec, config));
  Rng rng(config.seed);
  switch (config.mode) {
    case DecodeMode::AR: return decode_ar(evaluator, config, rng);
    case DecodeMode::Jacobi: return decode_jacobi(evaluator, config, rng);
    case DecodeMode::SJD:
    case DecodeMode::SJDPP: return decode_sjd(evaluator, config, rng);
  }
  throw ConfigError("decode: unknown mode");
}

RunResult decode(const ModelSpec& spec, const DecodeConfig& config) {
  return decode(load_model(spec), config);
}

}  // namespace specjacobi
