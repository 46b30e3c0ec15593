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

#include "specjacobi/grid_ngram.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "specjacobi/hash_logit.hpp"

namespace specjacobi {

std::vector<std::vector<TokenId>> generate_corpus(const CorpusSpec& corpus, std::size_t vocab_size) {
  if (corpus.grid_height == 0 || corpus.grid_width == 0)
    throw std::invalid_argument("corpus: grid dimensions must be positive");
  if (corpus.background >= vocab_size)
    throw std::invalid_argument("corpus: background token outside vocabulary");

  std::mt19937_64 engine(corpus.corpus_seed);
  const std::size_t h = corpus.grid_height;
  const std::size_t w = corpus.grid_width;
  std::vector<std::vector<TokenId>> grids;
  grids.reserve(corpus.grid_count);
  for (std::size_t g = 0; g < corpus.grid_count; ++g) {
    std::vector<TokenId> grid(h * w, corpus.background);
    if (corpus.recipe == CorpusRecipe::Rectangles) {
      for (std::size_t r = 0; r < corpus.rects_per_grid; ++r) {
        const auto color = static_cast<TokenId>(engine() % vocab_size);
        const std::size_t row0 = engine() % h;
        const std::size_t col0 = engine() % w;
        const std::size_t rows = 1 + engine() % (h - row0);
        const std::size_t cols = 1 + engine() % (w - col0);
        for (std::size_t i = row0; i < row0 + rows; ++i)
          for (std::size_t j = col0; j < col0 + cols; ++j) grid[i * w + j] = color;
      }
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

GridNGramModel GridNGramModel::train(const ModelSpec& spec) {
  if (spec.kind != ModelKind::GridNGram)
    throw std::invalid_argument("ngram_train: spec is not a GridNGram model");
  const auto corpus = generate_corpus(spec.ngram.corpus, spec.vocab_size);
  return train(spec.vocab_size, spec.ngram.order, spec.ngram.smoothing, corpus);
}

GridNGramModel GridNGramModel::train(std::size_t vocab_size, std::size_t order, double smoothing,
                                     const std::vector<std::vector<TokenId>>& corpus) {
  if (vocab_size < 2) throw std::invalid_argument("ngram_train: vocab_size must be >= 2");
  if (order < 2 || order > 3) throw std::invalid_argument("ngram_train: order must be 2 or 3");
  if (!(smoothing > 0.0) || !std::isfinite(smoothing))
    throw std::invalid_argument("ngram_train: smoothing must be positive and finite");
  if (corpus.empty()) throw std::invalid_argument("ngram_train: empty corpus");

  GridNGramModel model(vocab_size, order, smoothing);
  const std::size_t ctx_len = order - 1;
  for (const auto& grid : corpus) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] >= vocab_size) throw std::invalid_argument("ngram_train: corpus token outside vocabulary");
      auto ctx = context_window(std::span<const TokenId>(grid.data(), i), ctx_len);
      Row& row = model.table_[std::move(ctx)];
      if (row.counts.empty()) row.counts.assign(vocab_size, 0);
      ++row.counts[grid[i]];
      ++row.total;
    }
  }
  return model;
}

const GridNGramModel::Row* GridNGramModel::find(std::span<const std::int64_t> context) const {
  // std::map<vector> has no heterogeneous lookup for spans.
  const std::vector<std::int64_t> key(context.begin(), context.end());
  const auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

double GridNGramModel::probability(std::span<const std::int64_t> context, TokenId token) const {
  const Row* row = find(context);
  const double count = row ? static_cast<double>(row->counts[token]) : 0.0;
  const double total = row ? static_cast<double>(row->total) : 0.0;
  return (count + smoothing_) / (total + smoothing_ * static_cast<double>(vocab_size_));
}

std::uint64_t GridNGramModel::count(std::span<const std::int64_t> context, TokenId token) const {
  const Row* row = find(context);
  return row ? row->counts[token] : 0;
}

std::uint64_t GridNGramModel::context_total(std::span<const std::int64_t> context) const {
  const Row* row = find(context);
  return row ? row->total : 0;
}

void GridNGramModel::logits(std::span<const TokenId> history, std::size_t /*position*/,
                            std::span<double> out) const {
  const auto ctx = context_window(history, order_ - 1);
  const Row* row = find(ctx);
  const double total = row ? static_cast<double>(row->total) : 0.0;
  const double denom = total + smoothing_ * static_cast<double>(vocab_size_);
  for (std::size_t v = 0; v < vocab_size_; ++v) {
    const double count = row ? static_cast<double>(row->counts[v]) : 0.0;
    out[v] = std::log((count + smoothing_) / denom);
  }
}

}  // namespace specjacobi
