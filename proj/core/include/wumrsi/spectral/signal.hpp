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
#include <cstddef>

#include <Eigen/Dense>

#include "wumrsi/spectral/acquisition.hpp"

namespace wumrsi::spectral {

using cplx = std::complex<double>;

/// Complex time-domain signal. Sample k is acquired at t = k * dwell.
class Fid
{
 public:
  Fid(Eigen::VectorXcd samples, AcquisitionParams params);

  [[nodiscard]] static Fid zeros(const AcquisitionParams &params);

  [[nodiscard]] const Eigen::VectorXcd &samples() const noexcept { return samples_; }
  [[nodiscard]] const AcquisitionParams &params() const noexcept { return params_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return samples_.size(); }

 private:
  Eigen::VectorXcd samples_;
  AcquisitionParams params_;
};

/// Frequency-domain signal on the fftshifted axis; ppm_axis() is strictly
/// increasing.
class Spectrum
{
 public:
  Spectrum(Eigen::VectorXcd bins, AcquisitionParams params);

  [[nodiscard]] static Spectrum zeros(const AcquisitionParams &params);

  [[nodiscard]] const Eigen::VectorXcd &bins() const noexcept { return bins_; }
  [[nodiscard]] const Eigen::VectorXd &ppm_axis() const noexcept { return ppm_; }
  [[nodiscard]] const AcquisitionParams &params() const noexcept { return params_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return bins_.size(); }

 private:
  Eigen::VectorXcd bins_;
  Eigen::VectorXd ppm_;
  AcquisitionParams params_;
};

[[nodiscard]] Eigen::VectorXd make_ppm_axis(const AcquisitionParams &params);

/// Throws InvalidArgument when the two spectra do not share an axis.
void require_same_axis(const Spectrum &a, const Spectrum &b, const char *what);

/// Half-open bin range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
  [[nodiscard]] bool contains(std::size_t k) const noexcept { return k >= begin && k < end; }
};

/// Bins whose ppm lies in [center - half_width, center + half_width]. A band
/// narrower than one bin yields the nearest bin; a band entirely outside the
/// axis throws InvalidArgument.
[[nodiscard]] IndexRange ppm_band_indices(const AcquisitionParams &params, double center_ppm,
                                          double half_width_ppm);
[[nodiscard]] IndexRange ppm_band_indices(const Spectrum &spec, double center_ppm, double half_width_ppm);

/// Bins with ppm in [lo, hi]; empty range when none.
[[nodiscard]] IndexRange ppm_window(const AcquisitionParams &params, double lo_ppm, double hi_ppm);

}  // namespace wumrsi::spectral
