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

#include "wumrsi/qsm/vsharp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "wumrsi/common/error.hpp"
#include "wumrsi/qsm/dipole.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::qsm {

std::vector<double> default_vsharp_radii(const VoxelSize &voxel_mm, double max_radius_mm)
{
  const double step = *std::min_element(voxel_mm.begin(), voxel_mm.end());
  if (!(step > 0.0)) {
    throw InvalidArgument("vsharp: voxel size must be positive");
  }
  std::vector<double> radii;
  for (double r = max_radius_mm; r >= step - 1e-9; r -= step) {
    radii.push_back(r);
  }
  if (radii.empty()) {
    radii.push_back(step);
  }
  return radii;
}

Volume<double> smv_kernel(const Dims3 &dims, const VoxelSize &voxel_mm, double radius_mm)
{
  if (!(radius_mm > 0.0)) {
    throw InvalidArgument("smv_kernel: radius must be positive");
  }
  std::vector<std::complex<double>> k(dims.size(), 0.0);
  const auto axis = [](std::size_t i, std::size_t n) { return spectral::fft::signed_index(i, n); };
  double total = 0.0;
  for (std::size_t z = 0; z < dims.nz; ++z) {
    const double dz = axis(z, dims.nz) * voxel_mm[2];
    for (std::size_t y = 0; y < dims.ny; ++y) {
      const double dy = axis(y, dims.ny) * voxel_mm[1];
      for (std::size_t x = 0; x < dims.nx; ++x) {
        const double dx = axis(x, dims.nx) * voxel_mm[0];
        if (dx * dx + dy * dy + dz * dz <= radius_mm * radius_mm + 1e-9) {
          k[x + dims.nx * (y + dims.ny * z)] = 1.0;
          total += 1.0;
        }
      }
    }
  }
  spectral::fft::transform3(k, dims, spectral::fft::Direction::forward);
  Volume<double> out(dims, voxel_mm, 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    out[i] = k[i].real() / total;
  }
  return out;
}

FieldMap vsharp(const FieldMap &field, const VsharpConfig &cfg)
{
  const Mask &mask = field.mask;
  require_same_grid(field.values, mask, "vsharp");
  if (count(mask) == 0) {
    throw InvalidArgument("vsharp: mask is empty");
  }
  const std::vector<double> radii = cfg.radii_mm.empty() ? default_vsharp_radii(mask.voxel_mm()) : cfg.radii_mm;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw InvalidArgument("vsharp: radii must be positive and strictly descending");
    }
  }
  if (!(cfg.tsvd > 0.0 && cfg.tsvd < 1.0)) {
    throw InvalidArgument("vsharp: tsvd threshold must lie in (0, 1)");
  }

  const Dims3 d = mask.dims();
  Volume<double> masked_field(d, mask.voxel_mm(), 0.0);
  Volume<double> mask_f(d, mask.voxel_mm(), 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0) {
      if (!std::isfinite(field.values[i])) {
        throw InvalidArgument("vsharp: non-finite field inside mask");
      }
      masked_field[i] = field.values[i];
      mask_f[i] = 1.0;
    }
  }

  FieldMap out{Volume<double>(d, mask.voxel_mm(), 0.0), Mask(d, mask.voxel_mm(), 0)};
  Volume<double> first_kernel;
  for (const double r : radii) {
    const Volume<double> s = smv_kernel(d, mask.voxel_mm(), r);
    if (first_kernel.empty()) {
      first_kernel = s;
    }
    const Volume<double> coverage = apply_kernel(mask_f, s);
    const Volume<double> smoothed = apply_kernel(masked_field, s);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (out.mask[i] == 0 && mask[i] != 0 && coverage[i] > 0.999) {
        out.mask[i] = 1;
        out.values[i] = masked_field[i] - smoothed[i];
      }
    }
  }
  if (count(out.mask) == 0) {
    throw InvalidArgument("vsharp: mask is smaller than the smallest kernel");
  }

  // Truncated deconvolution of (delta - S) for the largest radius.
  Volume<double> inv(d, mask.voxel_mm(), 0.0);
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const double h = 1.0 - first_kernel[i];
    inv[i] = std::abs(h) > cfg.tsvd ? 1.0 / h : 0.0;
  }
  Volume<double> local = apply_kernel(out.values, inv);
  for (std::size_t i = 0; i < local.size(); ++i) {
    out.values[i] = out.mask[i] != 0 ? local[i] : 0.0;
  }
  return out;
}

}  // namespace wumrsi::qsm
