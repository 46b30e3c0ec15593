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

namespace specjacobi {

/// Index into the model vocabulary, always < vocab size of the run.
using TokenId = std::uint32_t;

/// Pre-softmax scores, one per vocabulary entry.
using Logits = std::vector<double>;

/// Tolerance on the total mass of a valid distribution.
inline constexpr double kMassTolerance = 1e-9;

/// A categorical distribution over the vocabulary.
///
/// Construction validates the invariants (no negative entries, mass within
/// kMassTolerance of one), so any Distribution value in flight is valid.
class Distribution {
 public:
  Distribution() = default;

  /// Throws std::invalid_argument when `probs` is empty, has a negative or
  /// non-finite entry, or does not sum to one.
  explicit Distribution(std::vector<double> probs);

  /// Rescales non-negative weights to unit mass. Throws when the total is
  /// not strictly positive.
  static Distribution normalized(std::vector<double> weights);
  static Distribution uniform(std::size_t vocab_size);
  static Distribution point_mass(std::size_t vocab_size, TokenId token);

  std::size_t size() const noexcept { return probs_.size(); }
  bool empty() const noexcept { return probs_.empty(); }
  double operator[](TokenId token) const { return probs_[token]; }
  std::span<const double> probs() const noexcept { return probs_; }

  std::size_t support_size() const noexcept;
  double entropy() const noexcept;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  struct Unchecked {};
  Distribution(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

/// Ratio p/q with 0/0 defined as 0. Used for both acceptance and confidence.
inline double safe_ratio(double numerator, double denominator) noexcept {
  if (denominator <= 0.0) return 0.0;
  return numerator / denominator;
}

}  // namespace specjacobi
