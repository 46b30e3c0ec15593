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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specjacobi/distribution.hpp"
#include "specjacobi/grid.hpp"

namespace specjacobi {

/// Invalid user-facing configuration (bad field values, unknown names).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DecodeMode { AR, Jacobi, SJD, SJDPP };

enum class InitStrategy { Random, HorizontalRepeat, VerticalRepeat, HorizontalSample, VerticalSample };

std::string_view to_string(DecodeMode mode) noexcept;
std::string_view to_string(InitStrategy strategy) noexcept;
/// Accepts ar | jacobi | sjd | sjdpp. Throws ConfigError otherwise.
DecodeMode parse_decode_mode(std::string_view name);
/// Accepts random | h_repeat | v_repeat | h_sample | v_sample.
InitStrategy parse_init_strategy(std::string_view name);

/// Every decoding knob of a single run.
struct DecodeConfig {
  DecodeMode mode = DecodeMode::SJDPP;
  std::size_t window = 96;
  /// Clamped to the vocabulary size, so the default keeps the full vocabulary
  /// for any desk-scale model.
  std::size_t top_k = 2000;
  double temperature = 1.0;
  /// Overrides the model's own guidance weight when set.
  std::optional<double> cfg_weight;
  /// Confidence threshold for token reuse; consulted only in SJDPP mode.
  double reuse_threshold = 0.5;
  InitStrategy init = InitStrategy::Random;
  GridGeom grid;
  std::vector<TokenId> prompt;
  std::uint64_t seed = 0;
  /// Ablation switch: when false, slots surviving a rejection are discarded
  /// and re-initialized instead of refined.
  bool refine = true;

  std::size_t total_tokens() const noexcept { return grid.cells(); }
  std::size_t effective_top_k(std::size_t vocab_size) const noexcept {
    return top_k < vocab_size ? top_k : vocab_size;
  }

  friend bool operator==(const DecodeConfig&, const DecodeConfig&) = default;
};

/// Throws ConfigError if any field is out of range for a model with
/// `vocab_size` entries.
void validate(const DecodeConfig& config, std::size_t vocab_size);

}  // namespace specjacobi
