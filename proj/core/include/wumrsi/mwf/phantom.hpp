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

#include <cstdint>
#include <vector>

#include "wumrsi/mwf/decay_volume.hpp"

namespace wumrsi::mwf {

struct TwoPoolPhantomConfig {
  Dims3 dims{20, 20, 10};
  VoxelSize voxel_mm{3.4, 3.4, 3.4};
  double mask_fill = 0.9;  // ellipsoid semi-axes as a fraction of the half-extent
  double mwf = 0.15;
  double t2s_fast_ms = 10.0;
  double t2s_slow_ms = 60.0;
  double s0 = 1.0;
  double snr = 100.0;  // s0 / noise sigma; 0 or infinity = noise-free
  std::vector<double> te_ms;  // empty = first 56 echoes of the spectroscopic axis
  std::uint64_t seed = 0;

  void validate() const;
};

/// Magnitude of a two-pool decay plus complex Gaussian noise (Rician).
[[nodiscard]] DecayVolume make_two_pool_phantom(const TwoPoolPhantomConfig &cfg = {});

}  // namespace wumrsi::mwf
