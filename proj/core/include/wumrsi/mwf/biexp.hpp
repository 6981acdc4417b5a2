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

#include <span>
#include <vector>

namespace wumrsi::mwf {

struct BiexpBounds {
  double fast_min_ms = 3.0;
  double fast_max_ms = 25.0;
  double slow_min_ms = 25.0;
  double slow_max_ms = 150.0;

  void validate() const;
};

struct BiexpFit {
  double amp_fast = 0.0;
  double t2s_fast_ms = 0.0;
  double amp_slow = 0.0;
  double t2s_slow_ms = 0.0;
  double residual_norm = 0.0;

  /// amp_fast / (amp_fast + amp_slow), NaN when both vanish.
  [[nodiscard]] double mwf() const noexcept;
};

struct MonoexpFit {
  double amplitude = 0.0;
  double t2s_ms = 0.0;
  double residual_norm = 0.0;
};

/// Two-pool T2* fit by variable projection: a log-spaced grid over the pool
/// time constants with non-negative amplitudes, then Nelder-Mead refinement.
/// Never worse than the best single exponential within the bounds. Reusable
/// across voxels sharing the same echo times.
class BiexpFitter
{
 public:
  BiexpFitter(std::vector<double> te_ms, BiexpBounds bounds = {}, std::size_t grid_points = 40);

  [[nodiscard]] BiexpFit fit(std::span<const double> decay) const;
  [[nodiscard]] MonoexpFit fit_single(std::span<const double> decay) const;

  [[nodiscard]] const std::vector<double> &te_ms() const noexcept { return te_; }

 private:
  [[nodiscard]] BiexpFit fit_unit(std::span<const double> decay) const;

  std::vector<double> te_;
  BiexpBounds bounds_;
  std::vector<double> fast_grid_;
  std::vector<double> slow_grid_;
  std::vector<std::vector<double>> fast_basis_;
  std::vector<std::vector<double>> slow_basis_;
};

/// Throws InvalidArgument for fewer than 4 echoes, length mismatch or
/// negative samples. An all-zero decay gives zero amplitudes and NaN times.
[[nodiscard]] BiexpFit biexp_fit(std::span<const double> decay, std::span<const double> te_ms,
                                 const BiexpBounds &bounds = {});

}  // namespace wumrsi::mwf
