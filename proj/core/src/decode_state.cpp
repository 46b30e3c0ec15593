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

#include "specjacobi/decode_state.hpp"

#include <cmath>
#include <stdexcept>

namespace specjacobi {

DistCache::DistCache(std::size_t capacity) : slots_(capacity == 0 ? 1 : capacity) {}

void DistCache::put(std::size_t position, Distribution dist) {
  Entry& e = slots_[position % slots_.size()];
  e.position = position;
  e.valid = true;
  e.dist = std::move(dist);
}

const Distribution* DistCache::find(std::size_t position) const noexcept {
  const Entry& e = slots_[position % slots_.size()];
  return e.valid && e.position == position ? &e.dist : nullptr;
}

void PrefixState::commit(TokenId token, const Distribution& dist) {
  if (token >= dist.size()) throw std::out_of_range("commit: token outside vocabulary");
  const std::size_t position = committed.size();
  committed.push_back(token);
  committed_logprobs.push_back(std::log(dist[token]));
  dist_cache.put(position, dist);
}

}  // namespace specjacobi
