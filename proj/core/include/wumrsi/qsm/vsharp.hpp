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

#include <vector>

#include "wumrsi/qsm/field.hpp"

namespace wumrsi::qsm {

struct VsharpConfig {
  std::vector<double> radii_mm;  // strictly descending; empty = default_vsharp_radii
  double tsvd = 0.05;
};

/// 12 mm down to one voxel (smallest voxel edge) in one-voxel steps.
[[nodiscard]] std::vector<double> default_vsharp_radii(const VoxelSize &voxel_mm, double max_radius_mm = 12.0);

/// Normalized spherical-mean kernel in k-space (unshifted FFT ordering).
[[nodiscard]] Volume<double> smv_kernel(const Dims3 &dims, const VoxelSize &voxel_mm, double radius_mm);

/// Variable-radius SHARP background removal. The returned mask holds the
/// voxels for which at least one radius fits inside the input mask.
[[nodiscard]] FieldMap vsharp(const FieldMap &field, const VsharpConfig &cfg = {});

}  // namespace wumrsi::qsm
