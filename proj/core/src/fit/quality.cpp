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

#include "wumrsi/fit/quality.hpp"

#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::fit {

namespace {

constexpr int kZeroFill = 16;

}  // namespace

spectral::IndexRange noise_band(const spectral::AcquisitionParams &params, const QualityBands &bands)
{
  auto r = spectral::ppm_window(params, bands.noise_lo_ppm, bands.noise_hi_ppm);
  if (r.size() >= bands.min_noise_bins) {
    return r;
  }
  const double c = params.ref_ppm;
  r = spectral::ppm_window(params, 2.0 * c - bands.noise_hi_ppm, 2.0 * c - bands.noise_lo_ppm);
  if (r.size() >= bands.min_noise_bins) {
    return r;
  }
  const std::size_t tenth = std::max<std::size_t>(params.n_points / 10, 2);
  if (params.n_points < 4) {
    throw InvalidArgument("noise band: axis too short");
  }
  return {params.n_points - tenth, params.n_points};
}

double noise_std(const Spectrum &x, const QualityBands &bands)
{
  const auto r = noise_band(x.params(), bands);
  if (r.size() < 2) {
    throw InvalidArgument("noise band is empty");
  }
  const Eigen::VectorXd re = x.bins().segment(static_cast<Eigen::Index>(r.begin), static_cast<Eigen::Index>(r.size())).real();
  const double mean = re.mean();
  return std::sqrt((re.array() - mean).square().sum() / static_cast<double>(re.size() - 1));
}

double compute_snr(const Spectrum &x, const QualityBands &bands)
{
  const auto sig = spectral::ppm_window(x.params(), bands.signal_lo_ppm, bands.signal_hi_ppm);
  if (sig.size() == 0) {
    throw InvalidArgument("snr: signal band does not intersect the axis");
  }
  const double peak =
      x.bins().segment(static_cast<Eigen::Index>(sig.begin), static_cast<Eigen::Index>(sig.size())).real().cwiseAbs().maxCoeff();
  const double sd = noise_std(x, bands);
  if (sd == 0.0) {
    return peak > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  }
  return peak / sd;
}

double compute_fwhm(const Spectrum &x, double peak_ppm, double search_halfwidth_ppm, const QualityBands &bands)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const auto &p = x.params();
  const auto win = spectral::ppm_window(p, peak_ppm - search_halfwidth_ppm, peak_ppm + search_halfwidth_ppm);
  if (win.size() == 0) {
    return nan;
  }
  const double local_peak =
      x.bins().segment(static_cast<Eigen::Index>(win.begin), static_cast<Eigen::Index>(win.size())).cwiseAbs().maxCoeff();
  double sd = 0.0;
  try {
    sd = noise_std(x, bands);
  } catch (const InvalidArgument &) {
    sd = 0.0;
  }
  if (!(local_peak > 3.0 * sd) || local_peak == 0.0) {
    return nan;
  }

  // Zero-filled absorption spectrum; halving the first point removes the
  // constant offset a discrete transform adds to a Lorentzian.
  const auto n = static_cast<Eigen::Index>(p.n_points);
  const Eigen::Index nz = kZeroFill * n;
  Eigen::VectorXcd fid = Eigen::VectorXcd::Zero(nz);
  fid.head(n) = spectral::spectrum_to_fid(x).samples();
  fid(0) *= 0.5;
  std::span<std::complex<double>> s(fid.data(), static_cast<std::size_t>(nz));
  spectral::fft::transform(s, spectral::fft::Direction::forward);
  spectral::fft::fftshift(s);

  const double hz_per_bin = p.bandwidth_hz / static_cast<double>(nz);
  auto ppm_of = [&](double k) { return p.ppm_of_offset((k - static_cast<double>(nz / 2)) * hz_per_bin); };
  auto bin_of = [&](double ppm) { return p.offset_hz(ppm) / hz_per_bin + static_cast<double>(nz / 2); };
  const auto lo = static_cast<Eigen::Index>(std::max(0.0, std::ceil(bin_of(peak_ppm - search_halfwidth_ppm))));
  const auto hi = static_cast<Eigen::Index>(
      std::min(static_cast<double>(nz - 1), std::floor(bin_of(peak_ppm + search_halfwidth_ppm))));
  if (hi <= lo) {
    return nan;
  }
  Eigen::Index kmax = lo;
  for (Eigen::Index k = lo; k <= hi; ++k) {
    if (std::abs(fid(k)) > std::abs(fid(kmax))) {
      kmax = k;
    }
  }
  const std::complex<double> rot = std::polar(1.0, -std::arg(fid(kmax)));
  auto re = [&](Eigen::Index k) { return (fid(k) * rot).real(); };
  const double half = 0.5 * re(kmax);
  if (!(half > 0.0)) {
    return nan;
  }
  double left = nan;
  for (Eigen::Index k = kmax; k > 0; --k) {
    if (re(k - 1) < half) {
      const double f = (re(k) - half) / (re(k) - re(k - 1));
      left = static_cast<double>(k) - f;
      break;
    }
  }
  double right = nan;
  for (Eigen::Index k = kmax; k + 1 < nz; ++k) {
    if (re(k + 1) < half) {
      const double f = (re(k) - half) / (re(k) - re(k + 1));
      right = static_cast<double>(k) + f;
      break;
    }
  }
  if (std::isnan(left) || std::isnan(right)) {
    return nan;
  }
  return std::abs(ppm_of(right) - ppm_of(left));
}

}  // namespace wumrsi::fit
