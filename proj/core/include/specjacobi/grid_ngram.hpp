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
#include <map>
#include <span>
#include <vector>

#include "specjacobi/model.hpp"

namespace specjacobi {

/// Raster-serialized grids produced by a corpus recipe. Each inner vector
/// holds grid_height * grid_width tokens.
///
/// Generator (std::mt19937_64 seeded with corpus_seed, integer draws as
/// `engine() % range`): every grid starts filled with `background`; for
/// Rectangles, each of rects_per_grid rectangles draws, in this order,
///   color = engine() % vocab_size
///   row0  = engine() % grid_height,  col0 = engine() % grid_width
///   rows  = 1 + engine() % (grid_height - row0)
///   cols  = 1 + engine() % (grid_width - col0)
/// and paints that block. Later rectangles overwrite earlier ones.
std::vector<std::vector<TokenId>> generate_corpus(const CorpusSpec& corpus, std::size_t vocab_size);

/// Laplace-smoothed n-gram over raster-scanned token grids.
///
/// p(x | ctx) = (count(ctx, x) + alpha) / (count(ctx) + alpha * V), where
/// ctx is the previous order-1 tokens, left-padded with the sentinel -1 at
/// the start of every grid (and of every decode history). Unseen contexts
/// are therefore uniform. Logits are ln p.
class GridNGramModel final : public TokenModel {
 public:
  /// Throws std::invalid_argument if the corpus is empty or parameters are
  /// out of range.
  static GridNGramModel train(const ModelSpec& spec);
  static GridNGramModel train(std::size_t vocab_size, std::size_t order, double smoothing,
                              const std::vector<std::vector<TokenId>>& corpus);

  std::size_t vocab_size() const noexcept override { return vocab_size_; }
  void logits(std::span<const TokenId> history, std::size_t position,
              std::span<double> out) const override;

  double probability(std::span<const std::int64_t> context, TokenId token) const;
  std::uint64_t count(std::span<const std::int64_t> context, TokenId token) const;
  std::uint64_t context_total(std::span<const std::int64_t> context) const;
  std::size_t order() const noexcept { return order_; }

 private:
  struct Row {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
  };

  GridNGramModel(std::size_t vocab_size, std::size_t order, double smoothing)
      : vocab_size_(vocab_size), order_(order), smoothing_(smoothing) {}

  const Row* find(std::span<const std::int64_t> context) const;

  std::size_t vocab_size_;
  std::size_t order_;
  double smoothing_;
  std::map<std::vector<std::int64_t>, Row> table_;
};

}  // namespace specjacobi
