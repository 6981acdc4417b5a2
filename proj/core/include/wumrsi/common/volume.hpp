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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wumrsi/common/error.hpp"

namespace wumrsi {

struct Dims3 {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  [[nodiscard]] constexpr std::size_t size() const noexcept { return nx * ny * nz; }
  friend constexpr bool operator==(const Dims3 &, const Dims3 &) = default;
};

using VoxelSize = std::array<double, 3>;

/// Dense 3D grid, x fastest, then y, then z.
template <typename T>
class Volume
{
 public:
  Volume() = default;

  explicit Volume(Dims3 dims, VoxelSize voxel_mm = {1.0, 1.0, 1.0}, T fill = T{})
      : dims_(dims), voxel_mm_(voxel_mm), values_(dims.size(), fill)
  {
  }

  Volume(Dims3 dims, VoxelSize voxel_mm, std::vector<T> values)
      : dims_(dims), voxel_mm_(voxel_mm), values_(std::move(values))
  {
    if (values_.size() != dims_.size()) {
      throw InvalidArgument("volume value count does not match dims");
    }
  }

  [[nodiscard]] const Dims3 &dims() const noexcept { return dims_; }
  [[nodiscard]] const VoxelSize &voxel_mm() const noexcept { return voxel_mm_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] std::size_t index(std::size_t x, std::size_t y, std::size_t z) const noexcept
  {
    return x + dims_.nx * (y + dims_.ny * z);
  }

  [[nodiscard]] std::array<std::size_t, 3> coords(std::size_t i) const noexcept
  {
    return {i % dims_.nx, (i / dims_.nx) % dims_.ny, i / (dims_.nx * dims_.ny)};
  }

  T &operator[](std::size_t i) noexcept { return values_[i]; }
  const T &operator[](std::size_t i) const noexcept { return values_[i]; }
  T &operator()(std::size_t x, std::size_t y, std::size_t z) noexcept { return values_[index(x, y, z)]; }
  const T &operator()(std::size_t x, std::size_t y, std::size_t z) const noexcept
  {
    return values_[index(x, y, z)];
  }

  [[nodiscard]] std::span<T> values() noexcept { return values_; }
  [[nodiscard]] std::span<const T> values() const noexcept { return values_; }
  [[nodiscard]] std::vector<T> &storage() noexcept { return values_; }

  [[nodiscard]] bool same_grid(const Dims3 &other) const noexcept { return dims_ == other; }

 private:
  Dims3 dims_{};
  VoxelSize voxel_mm_{1.0, 1.0, 1.0};
  std::vector<T> values_;
};

using Mask = Volume<std::uint8_t>;

[[nodiscard]] inline std::size_t count(const Mask &mask) noexcept
{
  std::size_t n = 0;
  for (auto v : mask.values()) {
    n += v != 0 ? 1U : 0U;
  }
  return n;
}

template <typename A, typename B>
void require_same_grid(const Volume<A> &a, const Volume<B> &b, const char *what)
{
  if (!(a.dims() == b.dims())) {
    throw InvalidArgument(std::string(what) + ": grid dimensions differ");
  }
}

}  // namespace wumrsi
