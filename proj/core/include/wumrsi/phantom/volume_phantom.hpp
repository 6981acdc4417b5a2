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

#include "wumrsi/phantom/augment.hpp"
#include "wumrsi/phantom/simulate.hpp"
#include "wumrsi/spectral/spectral_volume.hpp"

namespace wumrsi::phantom {

using spectral::SpectralVolume;

/// Ellipsoidal brain surrounded by a lipid-bearing skull shell.
struct VolumePhantomConfig {
  Dims3 dims{16, 16, 8};
  VoxelSize voxel_mm{3.4, 3.4, 3.4};
  AcquisitionParams acquisition{};
  double brain_fill = 0.70;  // brain semi-axes relative to the half extent
  double skull_fill = 0.95;  // outer skull semi-axes relative to the half extent
  double water_amp_factor = 1e3;
  double water_damping_hz = 20.0;
  double skull_water_frac = 0.3;
  double metabolite_variation = 0.2;
  bool sidebands = true;
  SidebandDrawConfig sideband_draw{};
  // Vibration coupling differs across the head: each voxel receives its own
  // perturbation (shift, mirroring, amplitude, phase) of the shared set.
  bool vary_sidebands = true;
  SidebandAugmentConfig sideband_variation{};
  double lipid_amplitude = 30.0;  // skull lipid total relative to the metabolite total
  double lipid_leak = 0.0;        // brain lipid level as a fraction of the skull level
  double lipid_damping_min = 40.0;
  double lipid_damping_max = 100.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Total signal plus the noise-free components (noise = total - sum).
struct VolumePhantom {
  SpectralVolume total;
  SpectralVolume water;
  SpectralVolume sidebands;
  SpectralVolume lipids;
  SpectralVolume metabolites;
  std::vector<SidebandComponent> sideband_set;
};

[[nodiscard]] std::pair<Mask, Mask> head_masks(const Dims3 &dims, const VoxelSize &voxel_mm, double brain_fill,
                                               double skull_fill);

[[nodiscard]] VolumePhantom simulate_volume(const VolumePhantomConfig &cfg, unsigned threads = 1);

}  // namespace wumrsi::phantom
