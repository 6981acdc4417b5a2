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

#include "wumrsi/qsm/dipole.hpp"
#include "wumrsi/qsm/field.hpp"

namespace wumrsi::qsm {

/// Susceptibility in ppm, zero outside the mask.
struct SusceptibilityMap {
  Volume<double> chi;
  Mask mask;
};

struct NdiConfig {
  std::size_t iterations = 500;
  double lambda = 1e-4;  // weight on the squared phase-scaled susceptibility
  double initial_step = 1.0;
  std::size_t max_halvings = 40;
  Vec3 b0_dir{0.0, 0.0, 1.0};
};

struct NdiResult {
  SusceptibilityMap map;
  std::vector<double> objective;  // initial value, then one entry per accepted step
  std::size_t iterations = 0;
  bool stalled = false;  // stopped early: no decrease after max_halvings
};

/// Gradient descent on sum W^2 |exp(i D u) - exp(i phi)|^2 + lambda |u|^2 with
/// u the susceptibility scaled to radians at TE_eff. W is the magnitude
/// normalized to its in-mask maximum. Throws NumericalError if the objective
/// becomes non-finite.
[[nodiscard]] NdiResult ndi_invert(const FieldMap &local_field, const Volume<double> &magnitude, double te_eff_ms,
                                   double b0_tesla, const NdiConfig &cfg = {});

/// Radians per ppm at the given echo time and field strength.
[[nodiscard]] double phase_per_ppm(double te_eff_ms, double b0_tesla) noexcept;

}  // namespace wumrsi::qsm
