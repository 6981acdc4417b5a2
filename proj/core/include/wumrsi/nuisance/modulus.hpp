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

#include <string>

#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::nuisance {

/// Sample-wise magnitude |s(t)|; imaginary parts are zero.
[[nodiscard]] spectral::Fid modulus_method(const spectral::Fid &fid);

enum class NuisanceMethod { hlsvd_l2, modulus_l2, external };

struct NuisanceEstimate {
  spectral::Spectrum y;
  NuisanceMethod method_tag = NuisanceMethod::external;
};

/// m = x1 - y.
[[nodiscard]] spectral::Spectrum subtract_nuisance(const spectral::Spectrum &x1, const NuisanceEstimate &y);

[[nodiscard]] const char *to_string(NuisanceMethod method) noexcept;
/// Accepts the CLI spellings hlsvd-l2, modulus-l2, subtract-file (and the
/// underscore forms); throws InvalidArgument otherwise.
[[nodiscard]] NuisanceMethod parse_method(const std::string &name);

}  // namespace wumrsi::nuisance
