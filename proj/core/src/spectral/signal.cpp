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

#include "wumrsi/spectral/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wumrsi/common/error.hpp"

namespace wumrsi::spectral {

namespace {

void require_finite(const Eigen::VectorXcd &v, const char *what)
{
  if (!v.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite samples");
  }
}

}  // namespace

Fid::Fid(Eigen::VectorXcd samples, AcquisitionParams params)
    : samples_(std::move(samples)), params_(params)
{
  params_.validate();
  if (static_cast<std::size_t>(samples_.size()) != params_.n_points) {
    throw InvalidArgument("fid: sample count " + std::to_string(samples_.size()) +
                          " does not match n_points " + std::to_string(params_.n_points));
  }
  require_finite(samples_, "fid");
}

Fid Fid::zeros(const AcquisitionParams &params)
{
  return {Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n_points)), params};
}

Spectrum::Spectrum(Eigen::VectorXcd bins, AcquisitionParams params)
    : bins_(std::move(bins)), params_(params)
{
  params_.validate();
  if (static_cast<std::size_t>(bins_.size()) != params_.n_points) {
    throw InvalidArgument("spectrum: bin count does not match n_points");
  }
  require_finite(bins_, "spectrum");
  ppm_ = make_ppm_axis(params_);
}

Spectrum Spectrum::zeros(const AcquisitionParams &params)
{
  return {Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n_points)), params};
}

Eigen::VectorXd make_ppm_axis(const AcquisitionParams &params)
{
  Eigen::VectorXd axis(static_cast<Eigen::Index>(params.n_points));
  for (std::size_t k = 0; k < params.n_points; ++k) {
    axis(static_cast<Eigen::Index>(k)) = params.bin_ppm(k);
  }
  return axis;
}

void require_same_axis(const Spectrum &a, const Spectrum &b, const char *what)
{
  if (!(a.params() == b.params())) {
    throw InvalidArgument(std::string(what) + ": spectra do not share an axis");
  }
}

IndexRange ppm_window(const AcquisitionParams &params, double lo_ppm, double hi_ppm)
{
  IndexRange r{params.n_points, params.n_points};
  for (std::size_t k = 0; k < params.n_points; ++k) {
    const double p = params.bin_ppm(k);
    if (p >= lo_ppm && p <= hi_ppm) {
      if (r.begin == params.n_points) {
        r.begin = k;
      }
      r.end = k + 1;
    }
  }
  if (r.begin == params.n_points) {
    return {0, 0};
  }
  return r;
}

IndexRange ppm_band_indices(const AcquisitionParams &params, double center_ppm, double half_width_ppm)
{
  if (!(half_width_ppm >= 0.0) || !std::isfinite(center_ppm)) {
    throw InvalidArgument("ppm band: half width must be non-negative and center finite");
  }
  const double bin_ppm = params.hz_per_bin() / params.larmor_mhz;
  const double axis_lo = params.bin_ppm(0) - 0.5 * bin_ppm;
  const double axis_hi = params.bin_ppm(params.n_points - 1) + 0.5 * bin_ppm;
  if (center_ppm + half_width_ppm < axis_lo || center_ppm - half_width_ppm > axis_hi) {
    throw InvalidArgument("ppm band: band lies entirely outside the spectral axis");
  }
  IndexRange r = ppm_window(params, center_ppm - half_width_ppm, center_ppm + half_width_ppm);
  if (r.size() > 0) {
    return r;
  }
  // Band narrower than a bin: nearest bin to the (clamped) center.
  const double clamped = std::clamp(center_ppm, params.bin_ppm(0), params.bin_ppm(params.n_points - 1));
  const double k = std::round((clamped - params.ref_ppm) * params.larmor_mhz * kPpmPerHzSign /
                              params.hz_per_bin()) +
                   static_cast<double>(params.n_points / 2);
  const auto kk = static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(params.n_points - 1)));
  return {kk, kk + 1};
}

IndexRange ppm_band_indices(const Spectrum &spec, double center_ppm, double half_width_ppm)
{
  return ppm_band_indices(spec.params(), center_ppm, half_width_ppm);
}

}  // namespace wumrsi::spectral
