/*
 * Copyright 2026 The wumrsi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wumrsi/common/volume.hpp"

namespace wumrsi::qsm {

/// Voxel offsets of a digital ball of the given radius (in voxels).
[[nodiscard]] std::vector<std::array<int, 3>> ball_offsets(double radius);

/// Binary dilation; the grid exterior counts as background.
[[nodiscard]] Mask dilate(const Mask &mask, double radius);

/// Binary erosion; the grid exterior counts as foreground, so voxels touching
/// the border are not eroded by it.
[[nodiscard]] Mask erode(const Mask &mask, double radius);

[[nodiscard]] Mask close(const Mask &mask, double radius);

/// 6-connected components. Labels are 1-based, 0 outside the mask.
struct Components {
  Volume<std::int32_t> labels;
  std::size_t count = 0;
};
[[nodiscard]] Components connected_components(const Mask &mask);

struct RefinedMask {
  Mask refined;
  Mask holes;  // voxels added back by the closing
};

/// Thresholds the quality map inside the mask and closes the result with a
/// ball of radius 2 voxels (clipped to the original mask).
[[nodiscard]] RefinedMask refine_mask(const Mask &mask, const Volume<double> &quality, double threshold = 0.3,
                                      double closing_radius = 2.0);

}  // namespace wumrsi::qsm
