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

#include "wumrsi/common/volume.hpp"

namespace wumrsi::qsm {

using Vec3 = std::array<double, 3>;

inline constexpr double kGammaBarMHzPerT = 42.577;

/// Unit-dipole response in k-space, unshifted FFT ordering:
/// D = 1/3 - (k.b)^2 / |k|^2, D(0) = 0. b0_dir is normalized internally.
[[nodiscard]] Volume<double> dipole_kernel(const Dims3 &dims, const VoxelSize &voxel_mm, Vec3 b0_dir = {0, 0, 1});

/// Circular convolution with a real, symmetric k-space kernel.
[[nodiscard]] Volume<double> apply_kernel(const Volume<double> &x, const Volume<double> &kernel_hat);

/// Field in Hz produced by a susceptibility distribution in ppm.
[[nodiscard]] Volume<double> forward_field(const Volume<double> &chi_ppm, double b0_tesla, Vec3 b0_dir = {0, 0, 1});

}  // namespace wumrsi::qsm
