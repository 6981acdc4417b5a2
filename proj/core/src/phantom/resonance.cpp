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

#include "wumrsi/phantom/resonance.hpp"

#include <cmath>

#include "wumrsi/common/error.hpp"

namespace wumrsi::phantom {

void Resonance::validate() const
{
  if (!(damping_hz > 0.0) || !std::isfinite(damping_hz)) {
    throw InvalidArgument("resonance '" + name + "': damping_hz must be positive");
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("resonance '" + name + "': amplitude must be non-negative");
  }
  if (!std::isfinite(shift_ppm) || !std::isfinite(phase_rad)) {
    throw InvalidArgument("resonance '" + name + "': non-finite shift or phase");
  }
}

void SidebandComponent::validate() const
{
  if (!(decay_hz > 0.0) || !std::isfinite(decay_hz)) {
    throw InvalidArgument("sideband: decay_hz must be positive");
  }
  if (!(amplitude_frac >= 0.0) || amplitude_frac > kMaxSidebandFrac) {
    throw InvalidArgument("sideband: amplitude_frac must lie in [0, 0.02]");
  }
  if (!std::isfinite(offset_hz) || !std::isfinite(phase_rad)) {
    throw InvalidArgument("sideband: non-finite offset or phase");
  }
}

void PhantomSpec::validate() const
{
  for (const auto &r : metabolites) {
    r.validate();
  }
  for (const auto &r : lipids) {
    r.validate();
  }
  for (const auto &s : sidebands) {
    s.validate();
  }
  if (!(water_amp_factor >= 0.0) || water_amp_factor > kMaxWaterFactor) {
    throw InvalidArgument("phantom: water_amp_factor must lie in [0, 1e4]");
  }
  if (!(water_damping_hz > 0.0)) {
    throw InvalidArgument("phantom: water_damping_hz must be positive");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidArgument("phantom: noise_sigma must be non-negative");
  }
}

double PhantomSpec::water_amplitude() const
{
  double total = 0.0;
  for (const auto &r : metabolites) {
    total += r.amplitude;
  }
  return water_amp_factor * (total > 0.0 ? total : 1.0);
}

std::vector<Resonance> default_metabolite_panel()
{
  return {
      {"NAA", 2.01, 1.00, 18.0, 0.0},
      {"Glu", 2.35, 0.55, 22.0, 0.0},
      {"tCr", 3.03, 0.80, 18.0, 0.0},
      {"tCho", 3.21, 0.30, 18.0, 0.0},
      {"mI", 3.55, 0.60, 22.0, 0.0},
      {"tCr_CH2", 3.91, 0.70, 20.0, 0.0},
      {"2HG", 4.02, 0.15, 22.0, 0.0},
  };
}

std::vector<Resonance> default_lipid_panel()
{
  return {
      {"Lip09", 0.9, 1.0, 60.0, 0.0},
      {"Lip13", 1.3, 3.0, 60.0, 0.0},
      {"Lip20", 2.0, 0.8, 60.0, 0.0},
  };
}

}  // namespace wumrsi::phantom
