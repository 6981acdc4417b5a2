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

#include "wumrsi/phantom/volume_phantom.hpp"

#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/parallel.hpp"
#include "wumrsi/phantom/training.hpp"

namespace wumrsi::phantom {

void VolumePhantomConfig::validate() const
{
  if (dims.size() == 0) {
    throw InvalidArgument("volume phantom: grid has no voxels");
  }
  if (!(brain_fill > 0.0) || !(skull_fill > brain_fill)) {
    throw InvalidArgument("volume phantom: need 0 < brain_fill < skull_fill");
  }
  if (water_amp_factor < 0.0 || water_amp_factor > kMaxWaterFactor) {
    throw InvalidArgument("volume phantom: water_amp_factor must lie in [0, 1e4]");
  }
  if (lipid_amplitude < 0.0 || lipid_leak < 0.0 || noise_sigma < 0.0 || skull_water_frac < 0.0) {
    throw InvalidArgument("volume phantom: amplitudes and noise must be non-negative");
  }
  if (metabolite_variation < 0.0 || metabolite_variation >= 1.0) {
    throw InvalidArgument("volume phantom: metabolite_variation must lie in [0, 1)");
  }
  acquisition.validate();
  if (sidebands) {
    sideband_draw.validate();
  }
}

std::pair<Mask, Mask> head_masks(const Dims3 &dims, const VoxelSize &voxel_mm, double brain_fill, double skull_fill)
{
  Mask brain(dims, voxel_mm);
  Mask skull(dims, voxel_mm);
  const double cx = 0.5 * static_cast<double>(dims.nx - 1);
  const double cy = 0.5 * static_cast<double>(dims.ny - 1);
  const double cz = 0.5 * static_cast<double>(dims.nz - 1);
  const double hx = std::max(0.5 * static_cast<double>(dims.nx), 0.5);
  const double hy = std::max(0.5 * static_cast<double>(dims.ny), 0.5);
  const double hz = std::max(0.5 * static_cast<double>(dims.nz), 0.5);
  for (std::size_t z = 0; z < dims.nz; ++z) {
    for (std::size_t y = 0; y < dims.ny; ++y) {
      for (std::size_t x = 0; x < dims.nx; ++x) {
        const double dx = (static_cast<double>(x) - cx) / hx;
        const double dy = (static_cast<double>(y) - cy) / hy;
        const double dz = (static_cast<double>(z) - cz) / hz;
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (r <= brain_fill) {
          brain(x, y, z) = 1;
        } else if (r <= skull_fill) {
          skull(x, y, z) = 1;
        }
      }
    }
  }
  return {std::move(brain), std::move(skull)};
}

VolumePhantom simulate_volume(const VolumePhantomConfig &cfg, unsigned threads)
{
  cfg.validate();
  const auto &acq = cfg.acquisition;
  auto [brain, skull] = head_masks(cfg.dims, cfg.voxel_mm, cfg.brain_fill, cfg.skull_fill);

  std::vector<SidebandComponent> sideband_set;
  if (cfg.sidebands) {
    Rng rng = substream(cfg.seed, "volume.sidebands");
    sideband_set = draw_sidebands(cfg.sideband_draw, rng);
  }
  double panel_total = 0.0;
  for (const auto &r : default_metabolite_panel()) {
    panel_total += r.amplitude;
  }

  const auto n = static_cast<Eigen::Index>(acq.n_points);
  const auto nvox = static_cast<Eigen::Index>(cfg.dims.size());
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, nvox);
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n, nvox);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, nvox);
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, nvox);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, nvox);

  parallel_for(cfg.dims.size(), threads, [&](std::size_t v) {
    const bool in_brain = brain[v] != 0;
    const bool in_skull = skull[v] != 0;
    if (!in_brain && !in_skull) {
      return;
    }
    Rng rng = substream(cfg.seed, "volume.voxel", v);
    PhantomSpec spec;
    spec.water_damping_hz = cfg.water_damping_hz;
    if (cfg.vary_sidebands && !sideband_set.empty()) {
      spec.sidebands = augment_sidebands(sideband_set, rng, cfg.sideband_variation);
    } else {
      spec.sidebands = sideband_set;
    }
    double lipid_total = 0.0;
    if (in_brain) {
      spec.metabolites = default_metabolite_panel();
      for (auto &r : spec.metabolites) {
        r.amplitude *= 1.0 + cfg.metabolite_variation * uniform(rng, -1.0, 1.0);
      }
      spec.water_amp_factor = cfg.water_amp_factor;
      lipid_total = cfg.lipid_leak * cfg.lipid_amplitude * panel_total;
    } else {
      // Skull: no metabolites; water level expressed against the panel total.
      spec.water_amp_factor = cfg.water_amp_factor * cfg.skull_water_frac * panel_total;
      lipid_total = cfg.lipid_amplitude * panel_total;
    }
    spec.water_amp_factor = std::min(spec.water_amp_factor, kMaxWaterFactor);
    if (lipid_total > 0.0) {
      spec.lipids = draw_lipids(lipid_total * uniform(rng, 0.7, 1.3), cfg.lipid_damping_min,
                                cfg.lipid_damping_max, rng);
    }
    spec.noise_sigma = cfg.noise_sigma;
    spec.seed = mix_seed(cfg.seed, "volume.noise", v);
    const SimulatedFid sim = simulate_fid(spec, acq);
    const auto col = static_cast<Eigen::Index>(v);
    total.col(col) = sim.total.samples();
    w.col(col) = sim.water.samples();
    s.col(col) = sim.sidebands.samples();
    l.col(col) = sim.lipids.samples();
    m.col(col) = sim.metabolites.samples();
  });

  SpectralVolume tv(cfg.dims, cfg.voxel_mm, acq, std::move(total), brain, skull);
  return {tv, tv.with_fids(std::move(w)), tv.with_fids(std::move(s)), tv.with_fids(std::move(l)),
          tv.with_fids(std::move(m)), std::move(sideband_set)};
}

}  // namespace wumrsi::phantom
