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

#include "wumrsi/common/volume.hpp"

namespace wumrsi::qsm {

/// Frequency offset map in Hz, finite inside the mask.
struct FieldMap {
  Volume<double> values;
  Mask mask;
};

struct CombinedField {
  FieldMap field;
  double te_eff_ms = 0.0;  // weighted-mean echo time
};

/// Echo weight TE * exp(-TE / T2*).
[[nodiscard]] double echo_weight(double te_ms, double t2star_ms) noexcept;

/// Voxel-wise weighted least-squares slope of unwrapped phase against TE.
[[nodiscard]] CombinedField combine_echoes(const std::vector<Volume<double>> &unwrapped,
                                           const std::vector<double> &te_ms, const Mask &mask,
                                           double t2star_ms = 25.0);

}  // namespace wumrsi::qsm
