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

#include "wumrsi/spectral/acquisition.hpp"

#include <cmath>

#include "wumrsi/common/error.hpp"

namespace wumrsi::spectral {

void AcquisitionParams::validate() const
{
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw InvalidArgument("acquisition: bandwidth_hz must be positive");
  }
  if (n_points < 2) {
    throw InvalidArgument("acquisition: n_points must be at least 2");
  }
  if (!(larmor_mhz > 0.0) || !std::isfinite(larmor_mhz)) {
    throw InvalidArgument("acquisition: larmor_mhz must be positive");
  }
  if (!std::isfinite(ref_ppm) || !std::isfinite(te_ms) || te_ms < 0.0) {
    throw InvalidArgument("acquisition: ref_ppm/te_ms must be finite and te_ms non-negative");
  }
  if (!(field_tesla > 0.0)) {
    throw InvalidArgument("acquisition: field_tesla must be positive");
  }
}

AcquisitionParams protocol_451()
{
  return AcquisitionParams{};
}

AcquisitionParams protocol_399()
{
  AcquisitionParams p;
  p.n_points = 399;
  return p;
}

}  // namespace wumrsi::spectral
