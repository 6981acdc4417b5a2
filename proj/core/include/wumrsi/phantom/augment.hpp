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

#include <cstddef>
#include <utility>
#include <vector>

#include "wumrsi/common/rng.hpp"
#include "wumrsi/phantom/resonance.hpp"
#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::phantom {

/// Distribution of freshly drawn sideband sets.
struct SidebandDrawConfig {
  std::size_t min_components = 4;
  std::size_t max_components = 8;
  double min_offset_hz = 200.0;
  double max_offset_hz = 900.0;
  double min_frac = 0.005;
  double max_frac = 0.02;
  double min_decay_hz = 20.0;
  double max_decay_hz = 200.0;
  bool mirrored = true;

  void validate() const;
};

[[nodiscard]] std::vector<SidebandComponent> draw_sidebands(const SidebandDrawConfig &cfg, Rng &rng);

struct SidebandAugmentConfig {
  double max_shift_hz = 60.0;
  double mirror_probability = 0.5;
  double max_amp_frac = 0.01;
};

/// Shift, optionally mirror about water, and redraw amplitude and phase.
/// When `mirrored_out` is given it records which components were mirrored.
[[nodiscard]] std::vector<SidebandComponent> augment_sidebands(const std::vector<SidebandComponent> &input, Rng &rng,
                                                               const SidebandAugmentConfig &cfg = {},
                                                               std::vector<bool> *mirrored_out = nullptr);

/// Common phase and scale applied to an input/target pair.
struct PairAugmentation {
  double omega_rad = 0.0;
  double scale = 1.0;
};

[[nodiscard]] PairAugmentation draw_pair_augmentation(Rng &rng, double min_scale = 0.5, double max_scale = 1.5);

[[nodiscard]] std::pair<spectral::Spectrum, spectral::Spectrum> apply_pair_augmentation(
    const spectral::Spectrum &x1, const spectral::Spectrum &y, const PairAugmentation &aug);

[[nodiscard]] std::pair<spectral::Spectrum, spectral::Spectrum> augment_pair(const spectral::Spectrum &x1,
                                                                            const spectral::Spectrum &y, Rng &rng);

}  // namespace wumrsi::phantom
