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

#include "wumrsi/phantom/augment.hpp"

#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"

namespace wumrsi::phantom {

void SidebandDrawConfig::validate() const
{
  if (min_components > max_components || max_components == 0) {
    throw InvalidArgument("sideband draw: component count range is empty");
  }
  if (!(min_offset_hz >= 0.0) || min_offset_hz > max_offset_hz) {
    throw InvalidArgument("sideband draw: invalid offset range");
  }
  if (!(min_frac >= 0.0) || min_frac > max_frac || max_frac > kMaxSidebandFrac) {
    throw InvalidArgument("sideband draw: amplitude fraction range must lie in [0, 0.02]");
  }
  if (!(min_decay_hz > 0.0) || min_decay_hz > max_decay_hz) {
    throw InvalidArgument("sideband draw: invalid decay range");
  }
}

std::vector<SidebandComponent> draw_sidebands(const SidebandDrawConfig &cfg, Rng &rng)
{
  cfg.validate();
  const auto count = std::uniform_int_distribution<std::size_t>(cfg.min_components, cfg.max_components)(rng);
  std::vector<SidebandComponent> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SidebandComponent c;
    c.offset_hz = uniform(rng, cfg.min_offset_hz, cfg.max_offset_hz);
    c.amplitude_frac = uniform(rng, cfg.min_frac, cfg.max_frac);
    c.decay_hz = uniform(rng, cfg.min_decay_hz, cfg.max_decay_hz);
    c.phase_rad = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    c.mirrored = cfg.mirrored;
    out.push_back(c);
  }
  return out;
}

std::vector<SidebandComponent> augment_sidebands(const std::vector<SidebandComponent> &input, Rng &rng,
                                                 const SidebandAugmentConfig &cfg, std::vector<bool> *mirrored_out)
{
  if (input.empty()) {
    throw InvalidArgument("augment_sidebands: empty component list");
  }
  if (!(cfg.max_amp_frac > 0.0) || cfg.max_amp_frac > kMaxSidebandFrac) {
    throw InvalidArgument("augment_sidebands: max_amp_frac must lie in (0, 0.02]");
  }
  std::vector<SidebandComponent> out;
  out.reserve(input.size());
  if (mirrored_out != nullptr) {
    mirrored_out->assign(input.size(), false);
  }
  for (std::size_t i = 0; i < input.size(); ++i) {
    SidebandComponent c = input[i];
    c.offset_hz += uniform(rng, -cfg.max_shift_hz, cfg.max_shift_hz);
    const bool mirror = uniform(rng, 0.0, 1.0) < cfg.mirror_probability;
    if (mirror) {
      c.offset_hz = -c.offset_hz;
    }
    // (0, max]: draw from [0, max) and reflect.
    c.amplitude_frac = cfg.max_amp_frac - uniform(rng, 0.0, cfg.max_amp_frac);
    c.phase_rad = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    if (mirrored_out != nullptr) {
      (*mirrored_out)[i] = mirror;
    }
    out.push_back(c);
  }
  return out;
}

PairAugmentation draw_pair_augmentation(Rng &rng, double min_scale, double max_scale)
{
  PairAugmentation a;
  a.omega_rad = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  a.scale = uniform(rng, min_scale, max_scale);
  return a;
}

std::pair<spectral::Spectrum, spectral::Spectrum> apply_pair_augmentation(const spectral::Spectrum &x1,
                                                                          const spectral::Spectrum &y,
                                                                          const PairAugmentation &aug)
{
  spectral::require_same_axis(x1, y, "augment_pair");
  const std::complex<double> f = std::polar(aug.scale, aug.omega_rad);
  return {spectral::Spectrum(x1.bins() * f, x1.params()), spectral::Spectrum(y.bins() * f, y.params())};
}

std::pair<spectral::Spectrum, spectral::Spectrum> augment_pair(const spectral::Spectrum &x1,
                                                               const spectral::Spectrum &y, Rng &rng)
{
  return apply_pair_augmentation(x1, y, draw_pair_augmentation(rng));
}

}  // namespace wumrsi::phantom
