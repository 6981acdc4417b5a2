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

#include <Eigen/Dense>

#include "wumrsi/common/volume.hpp"
#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::spectral {

/// 3D grid of FIDs. Column v of fids() holds voxel v (x fastest).
class SpectralVolume
{
 public:
  SpectralVolume(Dims3 dims, VoxelSize voxel_mm, AcquisitionParams params, Eigen::MatrixXcd fids, Mask brain,
                 Mask skull);

  [[nodiscard]] static SpectralVolume zeros(Dims3 dims, VoxelSize voxel_mm, AcquisitionParams params);

  [[nodiscard]] const Dims3 &dims() const noexcept { return dims_; }
  [[nodiscard]] const VoxelSize &voxel_mm() const noexcept { return voxel_mm_; }
  [[nodiscard]] const AcquisitionParams &params() const noexcept { return params_; }
  [[nodiscard]] std::size_t n_voxels() const noexcept { return dims_.size(); }
  [[nodiscard]] const Eigen::MatrixXcd &fids() const noexcept { return fids_; }
  [[nodiscard]] Fid fid(std::size_t voxel) const;
  [[nodiscard]] const Mask &brain_mask() const noexcept { return brain_; }
  [[nodiscard]] const Mask &skull_mask() const noexcept { return skull_; }

  /// Same geometry and masks, new samples.
  [[nodiscard]] SpectralVolume with_fids(Eigen::MatrixXcd fids) const;

 private:
  Dims3 dims_;
  VoxelSize voxel_mm_;
  AcquisitionParams params_;
  Eigen::MatrixXcd fids_;
  Mask brain_;
  Mask skull_;
};

}  // namespace wumrsi::spectral
