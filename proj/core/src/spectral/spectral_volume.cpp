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

#include "wumrsi/spectral/spectral_volume.hpp"

#include <string>

#include "wumrsi/common/error.hpp"

namespace wumrsi::spectral {

SpectralVolume::SpectralVolume(Dims3 dims, VoxelSize voxel_mm, AcquisitionParams params, Eigen::MatrixXcd fids,
                               Mask brain, Mask skull)
    : dims_(dims),
      voxel_mm_(voxel_mm),
      params_(params),
      fids_(std::move(fids)),
      brain_(std::move(brain)),
      skull_(std::move(skull))
{
  params_.validate();
  if (static_cast<std::size_t>(fids_.rows()) != params_.n_points ||
      static_cast<std::size_t>(fids_.cols()) != dims_.size()) {
    throw InvalidArgument("spectral volume: fid matrix must be n_points x n_voxels");
  }
  if (!(brain_.dims() == dims_) || !(skull_.dims() == dims_)) {
    throw InvalidArgument("spectral volume: mask dims differ from grid dims");
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (brain_[i] != 0 && skull_[i] != 0) {
      throw InvalidArgument("spectral volume: brain and skull masks overlap at voxel " + std::to_string(i));
    }
  }
  if (!fids_.allFinite()) {
    throw InvalidArgument("spectral volume: non-finite samples");
  }
}

SpectralVolume SpectralVolume::zeros(Dims3 dims, VoxelSize voxel_mm, AcquisitionParams params)
{
  return {dims,
          voxel_mm,
          params,
          Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(params.n_points), static_cast<Eigen::Index>(dims.size())),
          Mask(dims, voxel_mm),
          Mask(dims, voxel_mm)};
}

Fid SpectralVolume::fid(std::size_t voxel) const
{
  if (voxel >= dims_.size()) {
    throw InvalidArgument("spectral volume: voxel index out of range");
  }
  return {fids_.col(static_cast<Eigen::Index>(voxel)), params_};
}

SpectralVolume SpectralVolume::with_fids(Eigen::MatrixXcd fids) const
{
  return {dims_, voxel_mm_, params_, std::move(fids), brain_, skull_};
}

}  // namespace wumrsi::spectral
