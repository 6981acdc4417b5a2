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

#include "wumrsi/qsm/dipole.hpp"
#include "wumrsi/qsm/echo_volume.hpp"

namespace wumrsi::qsm {

struct SpherePhantomConfig {
  Dims3 dims{64, 64, 64};
  VoxelSize voxel_mm{2.0, 2.0, 2.0};
  double head_radius_mm = 44.0;
  double sphere_radius_mm = 16.0;
  double sphere_chi_ppm = 0.1;
  // Background: a susceptibility source outside the head plus a harmonic
  // offset and linear gradient.
  double source_radius_mm = 8.0;
  double source_chi_ppm = 1.0;
  Vec3 source_offset_mm{0.0, 0.0, -60.0};  // from the grid centre
  double offset_hz = 15.0;
  double gradient_hz_per_mm = 0.25;  // along x
  double t2star_ms = 25.0;
  double b0_tesla = 7.0;
  std::vector<double> te_ms;  // empty = first 56 echoes of the default spectroscopic axis
  double noise_sigma = 0.0;   // complex noise relative to unit proton density
  std::uint64_t seed = 0;

  void validate() const;
};

struct SpherePhantom {
  EchoVolume echoes;
  Mask head;
  Mask sphere;
  Volume<double> chi_ppm;           // tissue susceptibility only
  Volume<double> local_field_hz;    // field of the tissue susceptibility
  Volume<double> background_hz;     // everything produced outside the head
};

[[nodiscard]] std::vector<double> default_echo_times(std::size_t n_echoes = 56);

[[nodiscard]] SpherePhantom make_sphere_phantom(const SpherePhantomConfig &cfg = {});

}  // namespace wumrsi::qsm
