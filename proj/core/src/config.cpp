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

#include "specjacobi/config.hpp"

#include <cmath>

namespace specjacobi {

std::string_view to_string(DecodeMode mode) noexcept {
  switch (mode) {
    case DecodeMode::AR: return "ar";
    case DecodeMode::Jacobi: return "jacobi";
    case DecodeMode::SJD: return "sjd";
    case DecodeMode::SJDPP: return "sjdpp";
  }
  return "unknown";
}

std::string_view to_string(InitStrategy strategy) noexcept {
  switch (strategy) {
    case InitStrategy::Random: return "random";
    case InitStrategy::HorizontalRepeat: return "h_repeat";
    case InitStrategy::VerticalRepeat: return "v_repeat";
    case InitStrategy::HorizontalSample: return "h_sample";
    case InitStrategy::VerticalSample: return "v_sample";
  }
  return "unknown";
}

DecodeMode parse_decode_mode(std::string_view name) {
  for (auto mode : {DecodeMode::AR, DecodeMode::Jacobi, DecodeMode::SJD, DecodeMode::SJDPP})
    if (to_string(mode) == name) return mode;
  throw ConfigError("unknown decode mode '" + std::string(name) + "' (expected ar|jacobi|sjd|sjdpp)");
}

InitStrategy parse_init_strategy(std::string_view name) {
  for (auto s : {InitStrategy::Random, InitStrategy::HorizontalRepeat, InitStrategy::VerticalRepeat,
                 InitStrategy::HorizontalSample, InitStrategy::VerticalSample})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown init strategy '" + std::string(name) +
                    "' (expected random|h_repeat|v_repeat|h_sample|v_sample)");
}

void validate(const DecodeConfig& config, std::size_t vocab_size) {
  if (config.window < 1) throw ConfigError("decode: window must be >= 1");
  if (config.top_k < 1) throw ConfigError("decode: top_k must be >= 1");
  if (!(config.temperature > 0.0) || !std::isfinite(config.temperature))
    throw ConfigError("decode: temperature must be finite and > 0");
  if (!(config.reuse_threshold >= 0.0)) throw ConfigError("decode: reuse threshold must be >= 0");
  if (config.cfg_weight && !std::isfinite(*config.cfg_weight))
    throw ConfigError("decode: cfg weight must be finite");
  if (config.grid.height < 1 || config.grid.width < 1)
    throw ConfigError("decode: grid dimensions must be positive");
  for (TokenId t : config.prompt)
    if (t >= vocab_size) throw ConfigError("decode: prompt token outside vocabulary");
}

}  // namespace specjacobi
