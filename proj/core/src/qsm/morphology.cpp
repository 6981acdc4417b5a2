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

#include "wumrsi/qsm/morphology.hpp"

#include <cmath>
#include <deque>

#include "wumrsi/common/error.hpp"

namespace wumrsi::qsm {

std::vector<std::array<int, 3>> ball_offsets(double radius)
{
  if (!(radius >= 0.0)) {
    throw InvalidArgument("ball radius must be non-negative");
  }
  const int r = static_cast<int>(std::floor(radius));
  std::vector<std::array<int, 3>> out;
  for (int z = -r; z <= r; ++z) {
    for (int y = -r; y <= r; ++y) {
      for (int x = -r; x <= r; ++x) {
        if (x * x + y * y + z * z <= radius * radius + 1e-9) {
          out.push_back({x, y, z});
        }
      }
    }
  }
  return out;
}

namespace {

// Applies a min (erode) or max (dilate) filter over the ball.
Mask morph(const Mask &mask, double radius, bool dilation)
{
  const auto ball = ball_offsets(radius);
  const Dims3 d = mask.dims();
  Mask out(d, mask.voxel_mm(), 0);
  const auto inside = [&](long x, long y, long z) {
    return x >= 0 && y >= 0 && z >= 0 && x < static_cast<long>(d.nx) && y < static_cast<long>(d.ny) &&
           z < static_cast<long>(d.nz);
  };
  for (std::size_t z = 0; z < d.nz; ++z) {
    for (std::size_t y = 0; y < d.ny; ++y) {
      for (std::size_t x = 0; x < d.nx; ++x) {
        const bool self = mask(x, y, z) != 0;
        if (dilation ? self : !self) {
          out(x, y, z) = self ? 1 : 0;
          continue;
        }
        bool hit = false;
        for (const auto &o : ball) {
          const long xx = static_cast<long>(x) + o[0];
          const long yy = static_cast<long>(y) + o[1];
          const long zz = static_cast<long>(z) + o[2];
          bool v;
          if (inside(xx, yy, zz)) {
            v = mask(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy), static_cast<std::size_t>(zz)) != 0;
          } else {
            v = !dilation;
          }
          if (dilation ? v : !v) {
            hit = true;
            break;
          }
        }
        out(x, y, z) = dilation ? (hit ? 1 : 0) : (hit ? 0 : 1);
      }
    }
  }
  return out;
}

}  // namespace

Mask dilate(const Mask &mask, double radius)
{
  return morph(mask, radius, true);
}

Mask erode(const Mask &mask, double radius)
{
  return morph(mask, radius, false);
}

Mask close(const Mask &mask, double radius)
{
  return erode(dilate(mask, radius), radius);
}

Components connected_components(const Mask &mask)
{
  const Dims3 d = mask.dims();
  Components c{Volume<std::int32_t>(d, mask.voxel_mm(), 0), 0};
  std::deque<std::size_t> queue;
  const long sx = 1;
  const long sy = static_cast<long>(d.nx);
  const long sz = static_cast<long>(d.nx * d.ny);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == 0 || c.labels[i] != 0) {
      continue;
    }
    const auto label = static_cast<std::int32_t>(++c.count);
    c.labels[i] = label;
    queue.push_back(i);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      const auto xyz = mask.coords(v);
      const std::array<std::pair<bool, long>, 6> nb{{{xyz[0] > 0, -sx},
                                                     {xyz[0] + 1 < d.nx, sx},
                                                     {xyz[1] > 0, -sy},
                                                     {xyz[1] + 1 < d.ny, sy},
                                                     {xyz[2] > 0, -sz},
                                                     {xyz[2] + 1 < d.nz, sz}}};
      for (const auto &[ok, step] : nb) {
        if (!ok) {
          continue;
        }
        const auto n = static_cast<std::size_t>(static_cast<long>(v) + step);
        if (mask[n] != 0 && c.labels[n] == 0) {
          c.labels[n] = label;
          queue.push_back(n);
        }
      }
    }
  }
  return c;
}

RefinedMask refine_mask(const Mask &mask, const Volume<double> &quality, double threshold, double closing_radius)
{
  require_same_grid(mask, quality, "refine_mask");
  if (count(mask) == 0) {
    throw InvalidArgument("refine_mask: mask is empty");
  }
  Mask thresholded(mask.dims(), mask.voxel_mm(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    thresholded[i] = (mask[i] != 0 && quality[i] >= threshold) ? 1 : 0;
  }
  RefinedMask out{close(thresholded, closing_radius), Mask(mask.dims(), mask.voxel_mm(), 0)};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out.refined[i] = (out.refined[i] != 0 && mask[i] != 0) ? 1 : 0;
    out.holes[i] = (out.refined[i] != 0 && thresholded[i] == 0) ? 1 : 0;
  }
  return out;
}

}  // namespace wumrsi::qsm
