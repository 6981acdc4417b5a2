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

#include "wumrsi/common/volume.hpp"
#include "wumrsi/qsm/echo_volume.hpp"

namespace wumrsi::qsm {

struct UnwrapResult {
  std::vector<Volume<double>> unwrapped;  // one per echo, zero outside the mask
  Volume<double> quality;                 // in [0, 1], zero outside the mask
  std::size_t n_regions = 0;
  bool disconnected = false;  // more than one region was unwrapped independently
};

/// Mean over echoes and in-mask 6-neighbours of cos(phase difference),
/// clamped to [0, 1]. Isolated voxels get 0.
[[nodiscard]] Volume<double> phase_quality(const EchoVolume &ev, const Mask &mask);

/// Quality-guided region growing: a maximum-coherence spanning tree is grown
/// from the best voxel of each connected region and shared by all echoes.
/// Per-echo 2*pi offsets are then aligned along TE region by region.
[[nodiscard]] UnwrapResult unwrap_phase(const EchoVolume &ev, const Mask &mask);

}  // namespace wumrsi::qsm
