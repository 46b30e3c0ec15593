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
#include <span>

#include "specjacobi/config.hpp"
#include "specjacobi/decode_state.hpp"
#include "specjacobi/grid.hpp"
#include "specjacobi/rng.hpp"

namespace specjacobi {

/// Which rule produced a fresh slot; Random is also the fallback of every
/// other strategy.
enum class InitSource { Random, Repeat, Sample };

struct InitResult {
  DraftSlot slot;
  InitSource source = InitSource::Random;
};

/// Draft for grid position `abs_index`, which must be >= committed.size().
///
/// `live_window[k]` holds position committed.size() + k and must cover every
/// position between the prefix and `abs_index`.
///
///  - Random: token = floor(u * V), ref = uniform. One uniform.
///  - Horizontal/VerticalRepeat: copy the left (above) neighbor from the
///    prefix or window; ref = point mass at that token. Zero uniforms, or
///    one on Random fallback at col 0 (row 0).
///  - Horizontal/VerticalSample: draw from the model distribution predicted
///    at the left (above) neighbor, taken from the prefix cache or from a
///    scored window slot; ref = that distribution. One uniform either way;
///    falls back to Random when the neighbor has no cached prediction.
///
/// Throws std::out_of_range when abs_index is outside the grid or behind
/// the prefix.
InitResult init_token(InitStrategy strategy, std::size_t abs_index, const PrefixState& prefix,
                      std::span<const DraftSlot> live_window, const GridGeom& geom,
                      std::size_t vocab_size, Rng& rng);

}  // namespace specjacobi
