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

#include "specjacobi/hash_logit.hpp"

#include <stdexcept>

#include "specjacobi/rng.hpp"

namespace specjacobi {

std::vector<std::int64_t> context_window(std::span<const TokenId> history, std::size_t length) {
  std::vector<std::int64_t> window(length, kContextSentinel);
  const std::size_t take = history.size() < length ? history.size() : length;
  for (std::size_t i = 0; i < take; ++i)
    window[length - take + i] = static_cast<std::int64_t>(history[history.size() - take + i]);
  return window;
}

HashLogitModel::HashLogitModel(std::size_t vocab_size, HashParams params)
    : vocab_size_(vocab_size), params_(params) {
  if (vocab_size_ < 2) throw std::invalid_argument("hash logit: vocab_size must be >= 2");
  if (params_.context_len < 1) throw std::invalid_argument("hash logit: context_len must be >= 1");
  if (!(params_.sharpness >= 0.0)) throw std::invalid_argument("hash logit: sharpness must be >= 0");
}

void HashLogitModel::logits_for_window(std::span<const std::int64_t> window, std::size_t position,
                                       std::span<double> out) const {
  std::uint64_t h = mix64(params_.model_seed);
  for (std::int64_t t : window) h = mix64(h ^ static_cast<std::uint64_t>(t));
  h = mix64(h ^ static_cast<std::uint64_t>(position));
  for (std::size_t v = 0; v < vocab_size_; ++v) {
    const std::uint64_t hv = mix64(h ^ static_cast<std::uint64_t>(v));
    const double u = static_cast<double>(hv >> 11) * 0x1.0p-53;
    out[v] = params_.sharpness * u;
  }
}

void HashLogitModel::logits(std::span<const TokenId> history, std::size_t position,
                            std::span<double> out) const {
  std::int64_t window[64];
  const std::size_t c = params_.context_len;
  if (c <= 64) {
    const std::size_t take = history.size() < c ? history.size() : c;
    for (std::size_t i = 0; i < c - take; ++i) window[i] = kContextSentinel;
    for (std::size_t i = 0; i < take; ++i)
      window[c - take + i] = static_cast<std::int64_t>(history[history.size() - take + i]);
    logits_for_window(std::span<const std::int64_t>(window, c), position, out);
  } else {
    const auto w = context_window(history, c);
    logits_for_window(w, position, out);
  }
}

Logits hash_logit_logits(const ModelSpec& spec, std::span<const std::int64_t> window,
                         std::size_t position) {
  if (spec.kind != ModelKind::HashLogit)
    throw std::invalid_argument("hash_logit_logits: spec is not a HashLogit model");
  HashLogitModel model(spec.vocab_size, spec.hash);
  Logits out(spec.vocab_size);
  model.logits_for_window(window, position, out);
  return out;
}

}  // namespace specjacobi
