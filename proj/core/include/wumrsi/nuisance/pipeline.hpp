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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wumrsi/nuisance/hlsvd.hpp"
#include "wumrsi/nuisance/lipid_operator.hpp"
#include "wumrsi/nuisance/modulus.hpp"
#include "wumrsi/spectral/spectral_volume.hpp"

namespace wumrsi::nuisance {

using spectral::SpectralVolume;

struct PipelineConfig {
  HlsvdConfig hlsvd{};
  double diag_target = kDefaultDiagTarget;
  std::optional<double> beta;          // fixed beta; autotuned when empty
  std::size_t max_basis_columns = 512;  // skull spectra used for the lipid basis
  // Below this fraction of the raw skull energy left after water removal the
  // skull holds no lipid signal and the lipid stage is the identity (beta 0).
  double min_lipid_fraction = 1e-6;
  unsigned threads = 1;
};

struct VoxelFailure {
  std::size_t voxel = 0;
  std::array<std::size_t, 3> coords{};
  std::string message;
};

struct PipelineResult {
  SpectralVolume metabolites;  // FIDs of the cleaned brain spectra, zero elsewhere
  Mask flagged;                // voxels zeroed after a failure or without water modes
  std::vector<VoxelFailure> failures;
  double beta = 0.0;
  double mean_abs_diag = 1.0;
  std::size_t processed = 0;
};

/// Lipid operator from HLSVD-cleaned skull spectra of `vol`.
[[nodiscard]] LipidOperator skull_lipid_operator(const SpectralVolume &vol, const PipelineConfig &cfg);

/// hlsvd_l2: HLSVD water removal, then lipid suppression.
/// modulus_l2: magnitude of the FID, HLSVD, then lipid suppression.
[[nodiscard]] PipelineResult classical_pipeline(const SpectralVolume &vol, NuisanceMethod method,
                                                const PipelineConfig &cfg = {});

/// Same as above with a prebuilt lipid operator.
[[nodiscard]] PipelineResult classical_pipeline(const SpectralVolume &vol, NuisanceMethod method,
                                                const PipelineConfig &cfg, const LipidOperator &op);

/// m = x1 - y for every brain voxel. y holds FIDs; when `energies` is given
/// y is treated as normalized and multiplied back by the per-voxel energy.
[[nodiscard]] PipelineResult subtract_volume(const SpectralVolume &x1, const SpectralVolume &y,
                                             const std::vector<double> *energies = nullptr);

}  // namespace wumrsi::nuisance
