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

#include <cstdint>
#include <random>

namespace specjacobi {

/// splitmix64 finalizer. Also the building block of the HashLogit recipe.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed for the `index`-th independent run derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Uniform stream used by every decoder.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms are formed as (x >> 11) * 2^-53, so they lie in
/// [0, 1) and are bit-identical across standard libraries (unlike
/// std::uniform_real_distribution). `consumed()` counts uniforms drawn,
/// which the tests use to check the per-iteration consumption discipline.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    ++consumed_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t consumed() const noexcept { return consumed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t consumed_ = 0;
};

}  // namespace specjacobi
