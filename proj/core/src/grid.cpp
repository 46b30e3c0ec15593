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

#include "specjacobi/grid.hpp"

#include <stdexcept>
#include <string>

namespace specjacobi {

GridCoord index_to_rc(const GridGeom& geom, std::size_t index) {
  if (geom.width == 0 || index >= geom.cells())
    throw std::out_of_range("grid index " + std::to_string(index) + " outside " +
                            std::to_string(geom.height) + "x" + std::to_string(geom.width));
  return {index / geom.width, index % geom.width};
}

std::size_t rc_to_index(const GridGeom& geom, std::size_t row, std::size_t col) {
  if (row >= geom.height || col >= geom.width)
    throw std::out_of_range("grid coordinate (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside grid");
  return row * geom.width + col;
}

}  // namespace specjacobi
