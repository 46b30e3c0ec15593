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

namespace specjacobi {

/// Raster-scan token grid: index = row * width + col.
struct GridGeom {
  std::size_t height = 16;
  std::size_t width = 16;

  std::size_t cells() const noexcept { return height * width; }
  friend bool operator==(const GridGeom&, const GridGeom&) = default;
};

struct GridCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

/// Throws std::out_of_range for index >= height * width.
GridCoord index_to_rc(const GridGeom& geom, std::size_t index);
/// Throws std::out_of_range for row >= height or col >= width.
std::size_t rc_to_index(const GridGeom& geom, std::size_t row, std::size_t col);

}  // namespace specjacobi
