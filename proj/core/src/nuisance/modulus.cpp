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

#include "wumrsi/nuisance/modulus.hpp"

#include "wumrsi/common/error.hpp"

namespace wumrsi::nuisance {

spectral::Fid modulus_method(const spectral::Fid &fid)
{
  return {fid.samples().cwiseAbs().cast<std::complex<double>>(), fid.params()};
}

spectral::Spectrum subtract_nuisance(const spectral::Spectrum &x1, const NuisanceEstimate &y)
{
  spectral::require_same_axis(x1, y.y, "subtract_nuisance");
  return {x1.bins() - y.y.bins(), x1.params()};
}

const char *to_string(NuisanceMethod method) noexcept
{
  switch (method) {
    case NuisanceMethod::hlsvd_l2: return "hlsvd_l2";
    case NuisanceMethod::modulus_l2: return "modulus_l2";
    case NuisanceMethod::external: return "external";
  }
  return "external";
}

NuisanceMethod parse_method(const std::string &name)
{
  if (name == "hlsvd-l2" || name == "hlsvd_l2") return NuisanceMethod::hlsvd_l2;
  if (name == "modulus-l2" || name == "modulus_l2") return NuisanceMethod::modulus_l2;
  if (name == "subtract-file" || name == "external") return NuisanceMethod::external;
  throw InvalidArgument("unknown nuisance-removal method '" + name + "'");
}

}  // namespace wumrsi::nuisance
