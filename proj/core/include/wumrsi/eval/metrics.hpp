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

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wumrsi/common/volume.hpp"
#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::eval {

inline constexpr double kMetaboliteWindowLo = 1.8;
inline constexpr double kMetaboliteWindowHi = 4.2;

/// 100 * |est - truth| / |truth|. Throws InvalidArgument on length mismatch
/// or zero-norm truth.
[[nodiscard]] double nrmse(std::span<const std::complex<double>> est, std::span<const std::complex<double>> truth);
[[nodiscard]] double nrmse(std::span<const double> est, std::span<const double> truth);

/// Restricted to bins with ppm in [lo, hi].
[[nodiscard]] double nrmse(const spectral::Spectrum &est, const spectral::Spectrum &truth,
                           double lo_ppm = kMetaboliteWindowLo, double hi_ppm = kMetaboliteWindowHi);
/// Whole axis.
[[nodiscard]] double nrmse_full(const spectral::Spectrum &est, const spectral::Spectrum &truth);

/// Over the voxels of the mask.
[[nodiscard]] double nrmse(const Volume<double> &est, const Volume<double> &truth, const Mask &mask);

enum class Difference { absolute, percent };

[[nodiscard]] std::string to_string(Difference d);
[[nodiscard]] Difference parse_difference(const std::string &s);

struct BlandAltman {
  double bias = 0.0;
  double sd = 0.0;
  double loa_low = 0.0;
  double loa_high = 0.0;
  std::size_t n = 0;
  Difference difference = Difference::absolute;
  std::vector<std::pair<double, double>> pairs;  // (mean, difference)
};

/// Differences a - b (or 200 (a - b) / (a + b)); non-finite pairs are skipped.
/// Limits are bias -/+ 1.96 sample standard deviations. Throws
/// InvalidArgument with fewer than 2 usable pairs.
[[nodiscard]] BlandAltman bland_altman(std::span<const double> a, std::span<const double> b,
                                       Difference difference = Difference::absolute);

/// Finite-entry summary.
struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics. An input
/// without finite values gives n = 0 and NaN statistics.
[[nodiscard]] Summary summarize(std::span<const double> values);

}  // namespace wumrsi::eval
