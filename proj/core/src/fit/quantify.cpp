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

#include "wumrsi/fit/quantify.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wumrsi/common/error.hpp"

namespace wumrsi::fit {

void QuantifyParams::validate() const
{
  if (!(t1_met_ms > 0.0) || !(t1_water_ms > 0.0)) {
    throw InvalidArgument("quantify: T1 values must be positive");
  }
  if (!(tr_ms > 0.0) || !(flip_deg > 0.0) || !(flip_deg < 180.0)) {
    throw InvalidArgument("quantify: TR must be positive and the flip angle in (0, 180)");
  }
  if (!(water_conc_mM > 0.0)) {
    throw InvalidArgument("quantify: water concentration must be positive");
  }
}

double steady_state_factor(double t1_ms, double tr_ms, double flip_deg)
{
  const double a = flip_deg * std::numbers::pi / 180.0;
  const double e1 = std::exp(-tr_ms / t1_ms);
  return std::sin(a) * (1.0 - e1) / (1.0 - e1 * std::cos(a));
}

double quantify_absolute(double met_amp, double water_amp, const QuantifyParams &p)
{
  if (!(water_amp > 0.0) || !std::isfinite(met_amp)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double r_water = steady_state_factor(p.t1_water_ms, p.tr_ms, p.flip_deg);
  const double r_met = steady_state_factor(p.t1_met_ms, p.tr_ms, p.flip_deg);
  return met_amp / water_amp * p.water_conc_mM * r_water / r_met;
}

Volume<double> quantify_absolute(const Volume<double> &met_amp, const Volume<double> &water_amp,
                                 const QuantifyParams &p)
{
  p.validate();
  require_same_grid(met_amp, water_amp, "quantify_absolute");
  Volume<double> out(met_amp.dims(), met_amp.voxel_mm());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = quantify_absolute(met_amp[i], water_amp[i], p);
  }
  return out;
}

}  // namespace wumrsi::fit
