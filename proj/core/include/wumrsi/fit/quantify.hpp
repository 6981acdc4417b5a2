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

#include "wumrsi/common/volume.hpp"

namespace wumrsi::fit {

struct QuantifyParams {
  double t1_met_ms = 1500.0;
  double t1_water_ms = 2000.0;
  double tr_ms = 188.0;
  double flip_deg = 27.0;
  double water_conc_mM = 35880.0;

  void validate() const;
};

/// Steady-state spoiled signal factor sin(a) (1 - E1) / (1 - E1 cos(a)),
/// E1 = exp(-TR / T1).
[[nodiscard]] double steady_state_factor(double t1_ms, double tr_ms, double flip_deg);

/// C_met = (S_met / S_water) * water_conc * R_water / R_met. NaN where the
/// water amplitude is not positive.
[[nodiscard]] double quantify_absolute(double met_amp, double water_amp, const QuantifyParams &p);
[[nodiscard]] Volume<double> quantify_absolute(const Volume<double> &met_amp, const Volume<double> &water_amp,
                                               const QuantifyParams &p);

}  // namespace wumrsi::fit
