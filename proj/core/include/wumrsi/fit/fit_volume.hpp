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
#include <vector>

#include "wumrsi/common/volume.hpp"
#include "wumrsi/fit/fit.hpp"
#include "wumrsi/spectral/spectral_volume.hpp"

namespace wumrsi::fit {

/// Per-metabolite maps over the brain mask; NaN elsewhere and where the fit failed.
struct FitMaps {
  std::vector<std::string> names;
  std::vector<Volume<double>> amplitude;
  std::vector<Volume<double>> crlb_percent;
  Volume<double> snr;
  Volume<double> fwhm_ppm;
  Volume<double> shift_hz;
  Mask failed;
  std::size_t n_fitted = 0;
  std::size_t n_failed = 0;
};

/// Fits every brain voxel. With noise_sigma <= 0 the complex noise level of
/// each voxel is estimated from its spectral noise band.
[[nodiscard]] FitMaps fit_volume(const spectral::SpectralVolume &vol, const BasisSet &basis,
                                 const FitConfig &cfg = {}, double noise_sigma = 0.0, unsigned threads = 1);

}  // namespace wumrsi::fit
