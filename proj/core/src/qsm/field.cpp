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

#include "wumrsi/qsm/field.hpp"

#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"

namespace wumrsi::qsm {

double echo_weight(double te_ms, double t2star_ms) noexcept
{
  return te_ms * std::exp(-te_ms / t2star_ms);
}

CombinedField combine_echoes(const std::vector<Volume<double>> &unwrapped, const std::vector<double> &te_ms,
                             const Mask &mask, double t2star_ms)
{
  if (unwrapped.size() < 2 || unwrapped.size() != te_ms.size()) {
    throw InvalidArgument("combine_echoes: need at least two echoes with matching TE list");
  }
  if (!(t2star_ms > 0.0)) {
    throw InvalidArgument("combine_echoes: T2* must be positive");
  }
  for (const auto &u : unwrapped) {
    require_same_grid(u, mask, "combine_echoes");
  }
  const std::size_t ne = te_ms.size();
  std::vector<double> w(ne);
  double sw = 0.0;
  double swt = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    if (!(te_ms[e] > 0.0)) {
      throw InvalidArgument("combine_echoes: echo times must be positive");
    }
    w[e] = echo_weight(te_ms[e], t2star_ms);
    sw += w[e];
    swt += w[e] * te_ms[e];
  }
  const double tbar = swt / sw;
  double sxx = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    sxx += w[e] * (te_ms[e] - tbar) * (te_ms[e] - tbar);
  }
  if (!(sxx > 0.0)) {
    throw InvalidArgument("combine_echoes: echo times are degenerate");
  }

  CombinedField out{FieldMap{Volume<double>(mask.dims(), mask.voxel_mm(), 0.0), mask}, tbar};
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v] == 0) {
      continue;
    }
    double pbar = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      pbar += w[e] * unwrapped[e][v];
    }
    pbar /= sw;
    double sxy = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      sxy += w[e] * (te_ms[e] - tbar) * (unwrapped[e][v] - pbar);
    }
    // rad/ms -> Hz
    out.field.values[v] = sxy / sxx * 1000.0 / (2.0 * std::numbers::pi);
  }
  return out;
}

}  // namespace wumrsi::qsm
