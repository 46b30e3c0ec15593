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
#include "specjacobi/decode_state.hpp"
#include "specjacobi/distribution.hpp"
#include "specjacobi/model.hpp"
#include "specjacobi/rng.hpp"

namespace specjacobi {

/// What happened during one forward pass of a decode run.
struct IterationRecord {
  std::size_t j = 0;
  /// Drafts accepted by verification (for Jacobi: drafts matching greedy).
  std::size_t accepted_count = 0;
  /// 1 when the token at the first rejection was committed from the
  /// residual (for Jacobi: the greedy correction at the first mismatch).
  std::size_t committed_by_resample = 0;
  std::size_t reused_count = 0;
  std::size_t resampled_count = 0;
  /// Slots freshly initialized to fill this iteration's window.
  std::size_t fresh_count = 0;
  std::vector<double> confidences;
  std::uint64_t nfe_so_far = 0;
  std::size_t n_so_far = 0;

  std::size_t committed() const noexcept { return accepted_count + committed_by_resample; }
  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct RunResult {
  std::vector<TokenId> tokens;
  /// Forward passes counted by the decoder loop.
  std::uint64_t steps = 0;
  /// Forward passes counted independently by the WindowEvaluator.
  std::uint64_t model_nfe = 0;
  double step_compression = 0.0;
  std::vector<IterationRecord> trace;
  std::vector<double> committed_logprobs;
  double logprob_mean = 0.0;
  double logprob_std = 0.0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// A built model together with the ModelSpec it came from (guidance
/// settings live there).
struct LoadedModel {
  ModelSpec spec;
  std::shared_ptr<const TokenModel> model;
};

LoadedModel load_model(const ModelSpec& spec);

/// Runs one decode, dispatching on config.mode. The result is a pure
/// function of (model, config): all randomness comes from one Rng seeded
/// with config.seed. Throws ConfigError on invalid config.
RunResult decode(const LoadedModel& model, const DecodeConfig& config);
RunResult decode(const ModelSpec& spec, const DecodeConfig& config);

RunResult decode_ar(WindowEvaluator& evaluator, const DecodeConfig& config, Rng& rng);
RunResult decode_jacobi(WindowEvaluator& evaluator, const DecodeConfig& config, Rng& rng);
/// Covers both SJD and SJDPP (selected by config.mode).
RunResult decode_sjd(WindowEvaluator& evaluator, const DecodeConfig& config, Rng& rng);

struct VerifyOutcome {
  /// Index of the first rejected slot, or nullopt when every slot passed.
  std::optional<std::size_t> first_rejection;
  std::size_t uniforms_consumed = 0;

  std::size_t accepted(std::size_t window) const noexcept {
    return first_rejection ? *first_rejection : window;
  }
};

/// Sequential speculative check: slot s is accepted iff
/// r < min(1, new[x_s] / ref[x_s]) with a fresh r ~ U[0,1) per slot (0/0
/// counts as 0). Stops at the first failure.
VerifyOutcome verify_window(std::span<const DraftSlot> drafts, std::span<const Distribution> new_dists,
                            Rng& rng);

/// Token from normalize(max(0, d_new - d_ref)); one uniform. Falls back to
/// d_new when the positive part has mass below 1e-12.
TokenId residual_resample(const Distribution& d_new, const Distribution& d_ref, Rng& rng);

struct RefineOutcome {
  TokenId token = 0;
  /// d_s[token] / ref[token], 0/0 := 0.
  double confidence = 0.0;
  bool reused = false;
};

/// Next draft for a slot that survived past the first rejection. SJD always
/// resamples from d_s; SJDPP keeps the token when confidence > tau and
/// otherwise resamples. Either way the slot's new reference is d_s.
RefineOutcome refine_or_reuse(const DraftSlot& slot, const Distribution& d_s, DecodeMode mode,
                              double tau, Rng& rng);

}  // namespace specjacobi
