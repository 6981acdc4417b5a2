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

#include "wumrsi/mwf/decay_volume.hpp"

namespace wumrsi::mwf {

/// Tukey taper at normalized distance r in [0, 1] from the k-space centre:
/// flat up to 1 - alpha, then a half-cosine down to zero at r = 1.
[[nodiscard]] double tukey_taper(double r, double alpha) noexcept;

/// Separable k-space apodization of one image.
[[nodiscard]] Volume<double> tukey_filter(const Volume<double> &image, double alpha = 0.4);

/// Applies the window to every echo. Negative values left by ringing removal
/// are clamped to zero to keep magnitudes valid.
[[nodiscard]] DecayVolume tukey_filter(const DecayVolume &vol, double alpha = 0.4);

}  // namespace wumrsi::mwf
