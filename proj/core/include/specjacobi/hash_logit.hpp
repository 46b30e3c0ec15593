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
#include <span>
#include <vector>

#include "specjacobi/model.hpp"

namespace specjacobi {

/// Left padding for context windows shorter than the model's context length.
inline constexpr std::int64_t kContextSentinel = -1;

/// The last `length` tokens of `history`, left-padded with kContextSentinel.
std::vector<std::int64_t> context_window(std::span<const TokenId> history, std::size_t length);

/// Deterministic pseudo-random logits.
///
/// logits[v] = sharpness * u(seed, context, position, v), where
///
///   h  = mix64(seed)
///   h  = mix64(h ^ t)           for each context token t, oldest first
///                               (sentinel -1 enters as 0xFFFF'FFFF'FFFF'FFFF)
///   h  = mix64(h ^ position)
///   h  = mix64(h ^ v)
///   u  = (h >> 11) * 2^-53
///
/// and mix64 is the splitmix64 finalizer. All arithmetic is on uint64 with
/// wraparound, so results are bit-identical on every platform.
class HashLogitModel final : public TokenModel {
 public:
  HashLogitModel(std::size_t vocab_size, HashParams params);

  std::size_t vocab_size() const noexcept override { return vocab_size_; }
  void logits(std::span<const TokenId> history, std::size_t position,
              std::span<double> out) const override;

  /// Fills `out` from an explicit context window.
  void logits_for_window(std::span<const std::int64_t> window, std::size_t position,
                         std::span<double> out) const;

  const HashParams& params() const noexcept { return params_; }

 private:
  std::size_t vocab_size_;
  HashParams params_;
};

/// Raw logits of a HashLogit spec for one context window and position.
/// Throws std::invalid_argument if `spec` is not a HashLogit spec.
Logits hash_logit_logits(const ModelSpec& spec, std::span<const std::int64_t> window,
                         std::size_t position);

}  // namespace specjacobi
