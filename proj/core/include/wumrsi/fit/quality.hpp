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

#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::fit {

using spectral::Spectrum;

struct QualityBands {
  double signal_lo_ppm = 1.8;
  double signal_hi_ppm = 4.2;
  double noise_lo_ppm = 8.5;
  double noise_hi_ppm = 10.5;
  std::size_t min_noise_bins = 16;
};

/// Bins used as the signal-free reference: the configured band, else its
/// mirror about the carrier, else the highest-ppm tenth of the axis.
[[nodiscard]] spectral::IndexRange noise_band(const spectral::AcquisitionParams &params,
                                              const QualityBands &bands = {});

/// Standard deviation of the real part over the noise band.
[[nodiscard]] double noise_std(const Spectrum &x, const QualityBands &bands = {});

/// max |Re x| over the signal band divided by the noise standard deviation;
/// +inf when the noise band is exactly zero.
[[nodiscard]] double compute_snr(const Spectrum &x, const QualityBands &bands = {});

/// Full width at half maximum (ppm) of the absorption line nearest
/// peak_ppm, measured on a 16x zero-filled, peak-phased spectrum. NaN when
/// the peak is under 3x the noise level or no half-maximum crossing exists.
[[nodiscard]] double compute_fwhm(const Spectrum &x, double peak_ppm, double search_halfwidth_ppm = 0.15,
                                  const QualityBands &bands = {});

}  // namespace wumrsi::fit
