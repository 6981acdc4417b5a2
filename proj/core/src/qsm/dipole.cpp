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

#include "wumrsi/qsm/dipole.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::qsm {

using spectral::fft::signed_index;

Volume<double> dipole_kernel(const Dims3 &dims, const VoxelSize &voxel_mm, Vec3 b0_dir)
{
  const double nb = std::sqrt(b0_dir[0] * b0_dir[0] + b0_dir[1] * b0_dir[1] + b0_dir[2] * b0_dir[2]);
  if (!(nb > 0.0) || !std::isfinite(nb)) {
    throw InvalidArgument("dipole_kernel: b0 direction must be a non-zero finite vector");
  }
  if (dims.size() == 0) {
    throw InvalidArgument("dipole_kernel: empty grid");
  }
  for (auto &c : b0_dir) {
    c /= nb;
  }
  Volume<double> d(dims, voxel_mm, 0.0);
  for (std::size_t z = 0; z < dims.nz; ++z) {
    const double kz = signed_index(z, dims.nz) / (static_cast<double>(dims.nz) * voxel_mm[2]);
    for (std::size_t y = 0; y < dims.ny; ++y) {
      const double ky = signed_index(y, dims.ny) / (static_cast<double>(dims.ny) * voxel_mm[1]);
      for (std::size_t x = 0; x < dims.nx; ++x) {
        const double kx = signed_index(x, dims.nx) / (static_cast<double>(dims.nx) * voxel_mm[0]);
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) {
          continue;
        }
        const double kb = kx * b0_dir[0] + ky * b0_dir[1] + kz * b0_dir[2];
        d(x, y, z) = 1.0 / 3.0 - kb * kb / k2;
      }
    }
  }
  return d;
}

Volume<double> apply_kernel(const Volume<double> &x, const Volume<double> &kernel_hat)
{
  require_same_grid(x, kernel_hat, "apply_kernel");
  std::vector<std::complex<double>> buf(x.values().begin(), x.values().end());
  spectral::fft::transform3(buf, x.dims(), spectral::fft::Direction::forward);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    buf[i] *= kernel_hat[i];
  }
  spectral::fft::transform3(buf, x.dims(), spectral::fft::Direction::inverse);
  const double scale = 1.0 / static_cast<double>(buf.size());
  Volume<double> out(x.dims(), x.voxel_mm(), 0.0);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out[i] = buf[i].real() * scale;
  }
  return out;
}

Volume<double> forward_field(const Volume<double> &chi_ppm, double b0_tesla, Vec3 b0_dir)
{
  if (!(b0_tesla > 0.0)) {
    throw InvalidArgument("forward_field: B0 must be positive");
  }
  Volume<double> f = apply_kernel(chi_ppm, dipole_kernel(chi_ppm.dims(), chi_ppm.voxel_mm(), b0_dir));
  const double hz_per_ppm = kGammaBarMHzPerT * b0_tesla;
  for (auto &v : f.values()) {
    v *= hz_per_ppm;
  }
  return f;
}

}  // namespace wumrsi::qsm
