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

#include "wumrsi/qsm/phantom.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/rng.hpp"
#include "wumrsi/spectral/acquisition.hpp"

namespace wumrsi::qsm {

void SpherePhantomConfig::validate() const
{
  if (dims.size() == 0) {
    throw InvalidArgument("sphere phantom: empty grid");
  }
  if (!(head_radius_mm > 0.0) || !(sphere_radius_mm > 0.0) || !(sphere_radius_mm < head_radius_mm)) {
    throw InvalidArgument("sphere phantom: need 0 < sphere radius < head radius");
  }
  if (!(source_radius_mm >= 0.0) || !(t2star_ms > 0.0) || !(b0_tesla > 0.0) || !(noise_sigma >= 0.0)) {
    throw InvalidArgument("sphere phantom: invalid source radius, T2*, B0 or noise");
  }
  const double dist = std::sqrt(source_offset_mm[0] * source_offset_mm[0] + source_offset_mm[1] * source_offset_mm[1] +
                                source_offset_mm[2] * source_offset_mm[2]);
  if (source_radius_mm > 0.0 && !(dist > head_radius_mm + source_radius_mm)) {
    throw InvalidArgument("sphere phantom: background source must lie outside the head");
  }
}

std::vector<double> default_echo_times(std::size_t n_echoes)
{
  const auto p = spectral::protocol_451();
  std::vector<double> te(n_echoes);
  for (std::size_t e = 0; e < n_echoes; ++e) {
    te[e] = p.te_ms + static_cast<double>(e) * p.dwell_ms();
  }
  return te;
}

SpherePhantom make_sphere_phantom(const SpherePhantomConfig &cfg)
{
  cfg.validate();
  const Dims3 d = cfg.dims;
  const VoxelSize vs = cfg.voxel_mm;
  SpherePhantom ph;
  ph.head = Mask(d, vs, 0);
  ph.sphere = Mask(d, vs, 0);
  ph.chi_ppm = Volume<double>(d, vs, 0.0);
  Volume<double> source(d, vs, 0.0);

  const double cx = 0.5 * static_cast<double>(d.nx);
  const double cy = 0.5 * static_cast<double>(d.ny);
  const double cz = 0.5 * static_cast<double>(d.nz);
  for (std::size_t z = 0; z < d.nz; ++z) {
    for (std::size_t y = 0; y < d.ny; ++y) {
      for (std::size_t x = 0; x < d.nx; ++x) {
        const double px = (static_cast<double>(x) - cx) * vs[0];
        const double py = (static_cast<double>(y) - cy) * vs[1];
        const double pz = (static_cast<double>(z) - cz) * vs[2];
        const double r2 = px * px + py * py + pz * pz;
        if (r2 <= cfg.head_radius_mm * cfg.head_radius_mm) {
          ph.head(x, y, z) = 1;
        }
        if (r2 <= cfg.sphere_radius_mm * cfg.sphere_radius_mm) {
          ph.sphere(x, y, z) = 1;
          ph.chi_ppm(x, y, z) = cfg.sphere_chi_ppm;
        }
        const double sx = px - cfg.source_offset_mm[0];
        const double sy = py - cfg.source_offset_mm[1];
        const double sz = pz - cfg.source_offset_mm[2];
        if (sx * sx + sy * sy + sz * sz <= cfg.source_radius_mm * cfg.source_radius_mm) {
          source(x, y, z) = cfg.source_chi_ppm;
        }
      }
    }
  }

  ph.local_field_hz = forward_field(ph.chi_ppm, cfg.b0_tesla);
  ph.background_hz = forward_field(source, cfg.b0_tesla);
  for (std::size_t i = 0; i < ph.background_hz.size(); ++i) {
    const auto c = ph.background_hz.coords(i);
    const double px = (static_cast<double>(c[0]) - cx) * vs[0];
    ph.background_hz[i] += cfg.offset_hz + cfg.gradient_hz_per_mm * px;
  }

  ph.echoes.te_ms = cfg.te_ms.empty() ? default_echo_times() : cfg.te_ms;
  Rng rng = substream(cfg.seed, "qsm.phantom.noise");
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma / std::numbers::sqrt2);
  for (const double te : ph.echoes.te_ms) {
    Volume<double> mag(d, vs, 0.0);
    Volume<double> phase(d, vs, 0.0);
    const double decay = std::exp(-te / cfg.t2star_ms);
    for (std::size_t i = 0; i < mag.size(); ++i) {
      std::complex<double> s = 0.0;
      if (ph.head[i] != 0) {
        const double f = ph.local_field_hz[i] + ph.background_hz[i];
        s = std::polar(decay, 2.0 * std::numbers::pi * f * te * 1e-3);
      }
      if (cfg.noise_sigma > 0.0) {
        s += std::complex<double>(noise(rng), noise(rng));
      }
      mag[i] = std::abs(s);
      phase[i] = std::arg(s);
    }
    ph.echoes.magnitude.push_back(std::move(mag));
    ph.echoes.phase.push_back(std::move(phase));
  }
  ph.echoes.validate();
  return ph;
}

}  // namespace wumrsi::qsm
