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

#include "specjacobi/spatial_init.hpp"

#include <optional>
#include <stdexcept>

#include "specjacobi/model.hpp"

namespace specjacobi {
namespace {

InitResult random_slot(std::size_t vocab_size, Rng& rng) {
  auto token = static_cast<TokenId>(rng.uniform() * static_cast<double>(vocab_size));
  if (token >= vocab_size) token = static_cast<TokenId>(vocab_size - 1);
  return {DraftSlot{token, Distribution::uniform(vocab_size), false}, InitSource::Random};
}

// Neighbor position in raster order, or nullopt at the grid edge.
std::optional<std::size_t> neighbor(InitStrategy strategy, std::size_t abs_index, const GridGeom& geom) {
  const GridCoord rc = index_to_rc(geom, abs_index);
  switch (strategy) {
    case InitStrategy::HorizontalRepeat:
    case InitStrategy::HorizontalSample:
      if (rc.col == 0) return std::nullopt;
      return abs_index - 1;
    case InitStrategy::VerticalRepeat:
    case InitStrategy::VerticalSample:
      if (rc.row == 0) return std::nullopt;
      return abs_index - geom.width;
    case InitStrategy::Random:
      break;
  }
  return std::nullopt;
}

}  // namespace

InitResult init_token(InitStrategy strategy, std::size_t abs_index, const PrefixState& prefix,
                      std::span<const DraftSlot> live_window, const GridGeom& geom,
                      std::size_t vocab_size, Rng& rng) {
  const std::size_t n = prefix.size();
  if (abs_index < n) throw std::out_of_range("init_token: position is already committed");
  if (abs_index >= geom.cells()) throw std::out_of_range("init_token: position outside grid");

  if (strategy == InitStrategy::Random) return random_slot(vocab_size, rng);

  const auto nb = neighbor(strategy, abs_index, geom);
  if (!nb) return random_slot(vocab_size, rng);
  const bool in_prefix = *nb < n;
  const std::size_t k = *nb - (in_prefix ? 0 : n);
  if (!in_prefix && k >= live_window.size()) return random_slot(vocab_size, rng);

  if (strategy == InitStrategy::HorizontalRepeat || strategy == InitStrategy::VerticalRepeat) {
    const TokenId token = in_prefix ? prefix.committed[*nb] : live_window[k].token;
    return {DraftSlot{token, Distribution::point_mass(vocab_size, token), false}, InitSource::Repeat};
  }

  const Distribution* source = nullptr;
  if (in_prefix) {
    source = prefix.dist_cache.find(*nb);
  } else if (live_window[k].scored) {
    source = &live_window[k].ref_dist;
  }
  if (source == nullptr) return random_slot(vocab_size, rng);
  const TokenId token = sample(*source, rng);
  return {DraftSlot{token, *source, false}, InitSource::Sample};
}

}  // namespace specjacobi
