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

#include <filesystem>
#include <vector>

#include "wumrsi/common/volume.hpp"
#include "wumrsi/spectral/spectral_volume.hpp"

namespace wumrsi::qsm {

/// Multi-echo magnitude/phase stack, one 3D volume per echo.
struct EchoVolume {
  std::vector<Volume<double>> magnitude;
  std::vector<Volume<double>> phase;  // radians, wrapped to [-pi, pi]
  std::vector<double> te_ms;

  /// Throws InvalidArgument on inconsistent sizes, non-increasing TEs or
  /// out-of-range phase.
  void validate() const;

  [[nodiscard]] std::size_t n_echoes() const noexcept { return te_ms.size(); }
  [[nodiscard]] const Dims3 &dims() const { return magnitude.front().dims(); }
  [[nodiscard]] const VoxelSize &voxel_mm() const { return magnitude.front().voxel_mm(); }
};

/// Echo e is FID sample e of every voxel, at TE = te_ms + e * dwell.
[[nodiscard]] EchoVolume fid_volume_to_echoes(const spectral::SpectralVolume &vol, std::size_t n_echoes);

/// Voxel-wise sqrt(sum_e magnitude^2).
[[nodiscard]] Volume<double> rss_magnitude(const EchoVolume &ev);

[[nodiscard]] double wrap_to_pi(double phase) noexcept;

/// Stored as one complex64 WMK dataset in the echo domain.
void write_echo_volume(const std::filesystem::path &dir, const EchoVolume &ev, const Mask *mask = nullptr);
[[nodiscard]] EchoVolume read_echo_volume(const std::filesystem::path &dir, Mask *mask = nullptr);

/// Real 4D series (e.g. unwrapped phase) as float32 WMK, echo domain.
void write_series(const std::filesystem::path &dir, const std::vector<Volume<double>> &series,
                  const std::vector<double> &te_ms, const std::string &quantity);

}  // namespace wumrsi::qsm
