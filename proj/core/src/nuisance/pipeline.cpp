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

#include "wumrsi/nuisance/pipeline.hpp"

#include <algorithm>
#include <mutex>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/parallel.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::nuisance {

namespace {

std::vector<std::size_t> mask_indices(const Mask &mask)
{
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0) {
      idx.push_back(i);
    }
  }
  return idx;
}

PipelineResult empty_result(const SpectralVolume &vol)
{
  return {vol.with_fids(Eigen::MatrixXcd::Zero(vol.fids().rows(), vol.fids().cols())),
          Mask(vol.dims(), vol.voxel_mm()),
          {},
          0.0,
          1.0,
          0};
}

}  // namespace

LipidOperator skull_lipid_operator(const SpectralVolume &vol, const PipelineConfig &cfg)
{
  std::vector<std::size_t> skull = mask_indices(vol.skull_mask());
  if (skull.empty()) {
    throw StageError("lipid", "skull mask is empty");
  }
  if (cfg.max_basis_columns > 0 && skull.size() > cfg.max_basis_columns) {
    std::vector<std::size_t> picked;
    const double step = static_cast<double>(skull.size()) / static_cast<double>(cfg.max_basis_columns);
    for (std::size_t i = 0; i < cfg.max_basis_columns; ++i) {
      picked.push_back(skull[static_cast<std::size_t>(static_cast<double>(i) * step)]);
    }
    skull = std::move(picked);
  }
  const auto &params = vol.params();
  Eigen::MatrixXcd basis(static_cast<Eigen::Index>(params.n_points), static_cast<Eigen::Index>(skull.size()));
  double raw_energy = 0.0;
  for (const std::size_t v : skull) {
    raw_energy += vol.fids().col(static_cast<Eigen::Index>(v)).squaredNorm();
  }
  parallel_for(skull.size(), cfg.threads, [&](std::size_t c) {
    const spectral::Fid fid = vol.fid(skull[c]);
    Eigen::VectorXcd cleaned = fid.samples();
    try {
      cleaned = hlsvd_remove_water(fid, cfg.hlsvd).clean.samples();
    } catch (const NumericalError &) {
      // Keep the raw skull spectrum; water then stays in the basis.
    }
    basis.col(static_cast<Eigen::Index>(c)) = spectral::fid_to_spectrum(spectral::Fid(cleaned, params)).bins();
  });
  if (!(basis.squaredNorm() > cfg.min_lipid_fraction * raw_energy) || raw_energy == 0.0) {
    auto identity = std::make_shared<LipidFactor>();
    identity->n = basis.rows();
    identity->u = Eigen::MatrixXcd(basis.rows(), 0);
    return {std::move(identity), 0.0};
  }
  try {
    auto factor = std::make_shared<const LipidFactor>(factorize_lipid_basis(basis));
    const double beta = cfg.beta ? *cfg.beta : autotune_beta(*factor, cfg.diag_target).beta;
    return {factor, beta};
  } catch (const TargetUnreachable &e) {
    throw StageError("lipid", std::string(e.what()) + " (achievable mean|diag| in [" +
                                  std::to_string(e.achievable_low()) + ", " + std::to_string(e.achievable_high()) +
                                  "])");
  } catch (const InvalidArgument &e) {
    throw StageError("lipid", e.what());
  }
}

PipelineResult classical_pipeline(const SpectralVolume &vol, NuisanceMethod method, const PipelineConfig &cfg)
{
  if (count(vol.brain_mask()) == 0) {
    return empty_result(vol);
  }
  const LipidOperator op = skull_lipid_operator(vol, cfg);
  return classical_pipeline(vol, method, cfg, op);
}

PipelineResult classical_pipeline(const SpectralVolume &vol, NuisanceMethod method, const PipelineConfig &cfg,
                                  const LipidOperator &op)
{
  if (method == NuisanceMethod::external) {
    throw InvalidArgument("classical pipeline: external estimates go through subtract_volume");
  }
  PipelineResult res = empty_result(vol);
  const std::vector<std::size_t> brain = mask_indices(vol.brain_mask());
  if (brain.empty()) {
    return res;
  }
  if (static_cast<std::size_t>(op.size()) != vol.params().n_points) {
    throw InvalidArgument("classical pipeline: lipid operator size does not match the spectral axis");
  }
  res.beta = op.beta();
  res.mean_abs_diag = op.mean_abs_diag();
  const auto &params = vol.params();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(vol.fids().rows(), vol.fids().cols());
  std::mutex failure_mutex;
  parallel_for(brain.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t v = brain[i];
    try {
      spectral::Fid fid = vol.fid(v);
      if (method == NuisanceMethod::modulus_l2) {
        fid = modulus_method(fid);
      }
      const HlsvdResult h = hlsvd_remove_water(fid, cfg.hlsvd);
      const Eigen::VectorXcd spec = spectral::fid_to_spectrum(h.clean).bins();
      const spectral::Spectrum cleaned(op.suppress(spec), params);
      out.col(static_cast<Eigen::Index>(v)) = spectral::spectrum_to_fid(cleaned).samples();
      if (h.flagged) {
        res.flagged[v] = 1;
      }
    } catch (const Error &e) {
      res.flagged[v] = 1;
      out.col(static_cast<Eigen::Index>(v)).setZero();
      std::lock_guard lock(failure_mutex);
      res.failures.push_back({v, vol.brain_mask().coords(v), e.what()});
    }
  });
  std::sort(res.failures.begin(), res.failures.end(),
            [](const VoxelFailure &a, const VoxelFailure &b) { return a.voxel < b.voxel; });
  res.metabolites = vol.with_fids(std::move(out));
  res.processed = brain.size();
  return res;
}

PipelineResult subtract_volume(const SpectralVolume &x1, const SpectralVolume &y, const std::vector<double> *energies)
{
  if (!(x1.dims() == y.dims()) || !(x1.params() == y.params())) {
    throw InvalidArgument("subtract_volume: estimate does not match the input grid or axis");
  }
  if (energies != nullptr && energies->size() != x1.n_voxels()) {
    throw InvalidArgument("subtract_volume: energies must have one value per voxel");
  }
  PipelineResult res = empty_result(x1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x1.fids().rows(), x1.fids().cols());
  const std::vector<std::size_t> brain = mask_indices(x1.brain_mask());
  for (const std::size_t v : brain) {
    const auto c = static_cast<Eigen::Index>(v);
    const double scale = energies != nullptr ? (*energies)[v] : 1.0;
    out.col(c) = x1.fids().col(c) - scale * y.fids().col(c);
  }
  res.metabolites = x1.with_fids(std::move(out));
  res.processed = brain.size();
  return res;
}

}  // namespace wumrsi::nuisance
