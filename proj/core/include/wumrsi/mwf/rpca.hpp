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
#include <vector>

#include <Eigen/Dense>

#include "wumrsi/mwf/decay_volume.hpp"

namespace wumrsi::mwf {

struct RpcaConfig {
  double mu1 = 1.0;     // penalty tying the low-rank copy to the data term
  double mu2 = 1.0;     // weight of the data-fidelity term
  double rho = 0.5;     // relaxation of the low-rank update, in (0, 2)
  double delta1 = 0.01; // primal residual tolerance
  double delta2 = 0.01; // dual residual tolerance
  double delta3 = 0.01; // relative objective change tolerance
  std::array<std::size_t, 3> patch{10, 10, 10};
  double lambda_s = 0.0;  // 0 = 1 / sqrt(max(rows, echoes))
  std::size_t max_iterations = 200;
  unsigned threads = 0;

  void validate() const;
};

struct LowRankSparse {
  Eigen::MatrixXd low_rank;
  Eigen::MatrixXd sparse;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective_change = 0.0;
  double noise_sigma = 0.0;  // estimated from the median singular value
  bool converged = false;
};

/// Noise-aware robust PCA of a Casorati matrix (rows = voxels, columns =
/// echoes). The data are scaled so the estimated noise bulk of the singular
/// spectrum ends at one, then
///   min |Z|_* + lambda_s |S|_1 + mu2/2 |M - L - S|^2   s.t. L = Z
/// is solved by relaxed ADMM with penalty mu1. Residuals are relative to |M|.
[[nodiscard]] LowRankSparse rpca_decompose(const Eigen::MatrixXd &m, const RpcaConfig &cfg = {});

struct RpcaPatchReport {
  std::array<std::size_t, 3> origin{};
  std::size_t rows = 0;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

struct RpcaResult {
  DecayVolume denoised;
  std::vector<RpcaPatchReport> patches;
  std::size_t unconverged = 0;
};

/// Patchwise denoising with stride patch/2; overlapping estimates are
/// averaged. Voxels outside the mask pass through unchanged.
[[nodiscard]] RpcaResult rpca_denoise(const DecayVolume &vol, const RpcaConfig &cfg = {});

/// Patch origins along one axis: stride steps until a patch reaches the end.
[[nodiscard]] std::vector<std::size_t> patch_origins(std::size_t dim, std::size_t patch);

}  // namespace wumrsi::mwf
