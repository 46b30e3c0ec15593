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

#include "specjacobi/distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specjacobi {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution: empty probability vector");
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("distribution: negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw std::invalid_argument("distribution: mass " + std::to_string(total) + " is not 1");
}

Distribution Distribution::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument("distribution: negative or non-finite weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("distribution: zero total weight");
  for (double& w : weights) w /= total;
  return Distribution(std::move(weights));
}

Distribution Distribution::uniform(std::size_t vocab_size) {
  if (vocab_size == 0) throw std::invalid_argument("distribution: empty vocabulary");
  return Distribution(std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)),
                      Unchecked{});
}

Distribution Distribution::point_mass(std::size_t vocab_size, TokenId token) {
  if (token >= vocab_size) throw std::invalid_argument("distribution: point mass outside vocabulary");
  std::vector<double> probs(vocab_size, 0.0);
  probs[token] = 1.0;
  return Distribution(std::move(probs), Unchecked{});
}

std::size_t Distribution::support_size() const noexcept {
  std::size_t n = 0;
  for (double p : probs_) n += p > 0.0 ? 1 : 0;
  return n;
}

double Distribution::entropy() const noexcept {
  double h = 0.0;
  for (double p : probs_)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

}  // namespace specjacobi
