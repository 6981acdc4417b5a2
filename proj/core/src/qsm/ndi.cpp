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

#include "wumrsi/qsm/ndi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"

namespace wumrsi::qsm {

double phase_per_ppm(double te_eff_ms, double b0_tesla) noexcept
{
  return 2.0 * std::numbers::pi * te_eff_ms * 1e-3 * kGammaBarMHzPerT * b0_tesla;
}

namespace {

double objective(const std::vector<double> &w2, const std::vector<double> &du, const std::vector<double> &phi,
                 const std::vector<double> &u, double lambda)
{
  double f = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    f += w2[i] * (2.0 - 2.0 * std::cos(du[i] - phi[i])) + lambda * u[i] * u[i];
  }
  return f;
}

}  // namespace

NdiResult ndi_invert(const FieldMap &local_field, const Volume<double> &magnitude, double te_eff_ms, double b0_tesla,
                     const NdiConfig &cfg)
{
  const Mask &mask = local_field.mask;
  require_same_grid(local_field.values, mask, "ndi_invert");
  require_same_grid(magnitude, mask, "ndi_invert");
  if (!(te_eff_ms > 0.0) || !(b0_tesla > 0.0)) {
    throw InvalidArgument("ndi_invert: TE_eff and B0 must be positive");
  }
  if (!(cfg.lambda >= 0.0) || !(cfg.initial_step > 0.0)) {
    throw InvalidArgument("ndi_invert: lambda must be non-negative and the step positive");
  }
  if (count(mask) == 0) {
    throw InvalidArgument("ndi_invert: mask is empty");
  }

  const std::size_t n = mask.size();
  const double te_s = te_eff_ms * 1e-3;
  double wmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] != 0) {
      wmax = std::max(wmax, std::abs(magnitude[i]));
    }
  }
  std::vector<double> w2(n, 0.0);
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] != 0) {
      const double w = wmax > 0.0 ? std::abs(magnitude[i]) / wmax : 1.0;
      w2[i] = w * w;
      phi[i] = 2.0 * std::numbers::pi * local_field.values[i] * te_s;
      if (!std::isfinite(phi[i])) {
        throw InvalidArgument("ndi_invert: non-finite field inside mask");
      }
    }
  }

  const Volume<double> dk = dipole_kernel(mask.dims(), mask.voxel_mm(), cfg.b0_dir);
  Volume<double> u(mask.dims(), mask.voxel_mm(), 0.0);
  std::vector<double> du(n, 0.0);
  std::vector<double> trial_u(n);
  std::vector<double> trial_du(n);
  Volume<double> r(mask.dims(), mask.voxel_mm(), 0.0);

  NdiResult out;
  double f = objective(w2, du, phi, u.storage(), cfg.lambda);
  out.objective.push_back(f);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = 2.0 * w2[i] * std::sin(du[i] - phi[i]);
    }
    Volume<double> g = apply_kernel(r, dk);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = mask[i] != 0 ? g[i] + 2.0 * cfg.lambda * u[i] : 0.0;
    }
    const Volume<double> dg = apply_kernel(g, dk);

    double step = cfg.initial_step;
    bool accepted = false;
    for (std::size_t h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        trial_u[i] = u[i] - step * g[i];
        trial_du[i] = du[i] - step * dg[i];
      }
      const double ft = objective(w2, trial_du, phi, trial_u, cfg.lambda);
      if (!std::isfinite(ft)) {
        throw NumericalError("ndi_invert: objective became non-finite");
      }
      if (ft < f) {
        std::copy(trial_u.begin(), trial_u.end(), u.storage().begin());
        du.swap(trial_du);
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.stalled = true;
      break;
    }
    out.objective.push_back(f);
    out.iterations = it + 1;
  }

  const double scale = 1.0 / phase_per_ppm(te_eff_ms, b0_tesla);
  out.map.mask = mask;
  out.map.chi = Volume<double>(mask.dims(), mask.voxel_mm(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.map.chi[i] = mask[i] != 0 ? u[i] * scale : 0.0;
  }
  return out;
}

}  // namespace wumrsi::qsm
