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

#include "wumrsi/mwf/tukey.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::mwf {

double tukey_taper(double r, double alpha) noexcept
{
  if (alpha <= 0.0 || r <= 1.0 - alpha) {
    return 1.0;
  }
  if (r >= 1.0) {
    return 0.0;
  }
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - (1.0 - alpha)) / alpha));
}

namespace {

std::vector<double> axis_window(std::size_t n, double alpha)
{
  std::vector<double> w(n, 1.0);
  if (n < 2) {
    return w;
  }
  const double half = 0.5 * static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = tukey_taper(std::abs(spectral::fft::signed_index(k, n)) / half, alpha);
  }
  return w;
}

}  // namespace

Volume<double> tukey_filter(const Volume<double> &image, double alpha)
{
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("tukey_filter: alpha must lie in [0, 1]");
  }
  if (alpha == 0.0) {
    return image;
  }
  const Dims3 d = image.dims();
  const auto wx = axis_window(d.nx, alpha);
  const auto wy = axis_window(d.ny, alpha);
  const auto wz = axis_window(d.nz, alpha);
  std::vector<std::complex<double>> buf(image.values().begin(), image.values().end());
  spectral::fft::transform3(buf, d, spectral::fft::Direction::forward);
  for (std::size_t z = 0; z < d.nz; ++z) {
    for (std::size_t y = 0; y < d.ny; ++y) {
      for (std::size_t x = 0; x < d.nx; ++x) {
        buf[x + d.nx * (y + d.ny * z)] *= wx[x] * wy[y] * wz[z];
      }
    }
  }
  spectral::fft::transform3(buf, d, spectral::fft::Direction::inverse);
  const double scale = 1.0 / static_cast<double>(buf.size());
  Volume<double> out(d, image.voxel_mm(), 0.0);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out[i] = buf[i].real() * scale;
  }
  return out;
}

DecayVolume tukey_filter(const DecayVolume &vol, double alpha)
{
  vol.validate();
  DecayVolume out{{}, vol.te_ms, vol.mask};
  for (const auto &img : vol.magnitude) {
    Volume<double> f = tukey_filter(img, alpha);
    for (auto &v : f.values()) {
      v = std::max(v, 0.0);
    }
    out.magnitude.push_back(std::move(f));
  }
  return out;
}

}  // namespace wumrsi::mwf
