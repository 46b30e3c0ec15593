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
#include <vector>

#include "specjacobi/distribution.hpp"

namespace specjacobi {

/// One Jacobi-window position.
struct DraftSlot {
  TokenId token = 0;
  /// Distribution the token is currently drafted under; the denominator of
  /// its next acceptance ratio.
  Distribution ref_dist;
  /// True once ref_dist is a model prediction for this slot's own position
  /// (as opposed to an initialization proposal).
  bool scored = false;
};

/// Shaped distributions of the most recent positions, keyed by absolute
/// grid index. Older entries are overwritten once `capacity` is exceeded.
class DistCache {
 public:
  explicit DistCache(std::size_t capacity = 1);

  void put(std::size_t position, Distribution dist);
  /// nullptr when `position` was never stored or has been evicted.
  const Distribution* find(std::size_t position) const noexcept;
  std::size_t capacity() const noexcept { return slots_.size(); }

 private:
  struct Entry {
    std::size_t position = 0;
    bool valid = false;
    Distribution dist;
  };
  std::vector<Entry> slots_;
};

/// Committed prefix of a decode run.
struct PrefixState {
  std::vector<TokenId> committed;
  /// ln of the shaped probability each committed token was drawn or
  /// accepted under.
  std::vector<double> committed_logprobs;
  std::uint64_t nfe = 0;
  DistCache dist_cache;

  explicit PrefixState(std::size_t cache_capacity = 1) : dist_cache(cache_capacity) {}

  std::size_t size() const noexcept { return committed.size(); }
  /// Appends `token` and records ln dist[token]; caches `dist` at its position.
  void commit(TokenId token, const Distribution& dist);
};

}  // namespace specjacobi
