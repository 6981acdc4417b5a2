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
#include "wumrsi/qsm/echo_volume.hpp"

namespace wumrsi::mwf {

/// Multi-echo magnitude decay with its analysis mask.
struct DecayVolume {
  std::vector<Volume<double>> magnitude;  // one per echo
  std::vector<double> te_ms;
  Mask mask;

  /// Throws InvalidArgument on size mismatch, non-increasing TEs or
  /// negative/non-finite magnitude.
  void validate() const;

  [[nodiscard]] std::size_t n_echoes() const noexcept { return te_ms.size(); }
  [[nodiscard]] const Dims3 &dims() const { return mask.dims(); }
  [[nodiscard]] std::vector<double> decay(std::size_t voxel) const;
};

[[nodiscard]] DecayVolume decay_from_echoes(const qsm::EchoVolume &ev, const Mask &mask);

/// Keeps echoes up to last_te_ms, allowing half an echo spacing of slack so a
/// nominal TE matches the nearest sampled echo.
[[nodiscard]] DecayVolume crop_echoes(const DecayVolume &vol, double last_te_ms);

void write_decay_volume(const std::filesystem::path &dir, const DecayVolume &vol);
[[nodiscard]] DecayVolume read_decay_volume(const std::filesystem::path &dir);

}  // namespace wumrsi::mwf
