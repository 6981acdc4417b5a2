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
#include <string>
#include <vector>

namespace wumrsi::phantom {

/// One Lorentzian line: A exp(i phase) exp((i 2 pi f - damping) t).
struct Resonance {
  std::string name;
  double shift_ppm = 0.0;
  double amplitude = 0.0;
  double damping_hz = 10.0;
  double phase_rad = 0.0;

  void validate() const;
};

/// Gradient-vibration sideband relative to the water line. A mirrored
/// component is a pair at water +/- offset with antisymmetric phases, i.e.
/// a small phase modulation of the water signal.
struct SidebandComponent {
  double offset_hz = 0.0;
  double amplitude_frac = 0.0;
  double decay_hz = 50.0;
  double phase_rad = 0.0;
  bool mirrored = true;

  void validate() const;
};

inline constexpr double kMaxSidebandFrac = 0.02;
inline constexpr double kMaxWaterFactor = 1e4;
inline constexpr double kWaterPpm = 4.7;

struct PhantomSpec {
  std::vector<Resonance> metabolites;
  double water_amp_factor = 0.0;  // relative to the summed metabolite amplitude
  double water_damping_hz = 20.0;
  double water_phase_rad = 0.0;
  std::vector<SidebandComponent> sidebands;
  std::vector<Resonance> lipids;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;

  /// Absolute water amplitude: factor times the metabolite total (or 1 when
  /// there are no metabolites).
  [[nodiscard]] double water_amplitude() const;
};

/// Literature chemical shifts at 7 T; amplitudes are relative concentrations.
[[nodiscard]] std::vector<Resonance> default_metabolite_panel();

/// Broad lipid lines at 0.9, 1.3 and 2.0 ppm.
[[nodiscard]] std::vector<Resonance> default_lipid_panel();

}  // namespace wumrsi::phantom
