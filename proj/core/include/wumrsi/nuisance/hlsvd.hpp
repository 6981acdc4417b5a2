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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::nuisance {

using spectral::Fid;

enum class ModeSelection {
  rank_then_band,  // keep the `rank` strongest components, then filter by band
  band_then_rank,  // filter by band, then keep up to `rank` of the strongest
};

struct HlsvdConfig {
  int rank = 32;
  double band_center_ppm = 4.7;
  double band_halfwidth_ppm = 0.5;
  Eigen::Index hankel_rows = 0;  // 0 selects n / 2
  ModeSelection selection = ModeSelection::rank_then_band;

  void validate() const;
};

/// One damped complex exponential a z^k, z = exp((i 2 pi f - d) dt).
struct Mode {
  std::complex<double> amplitude;
  double freq_hz = 0.0;
  double damping_hz = 0.0;
};

/// Damped-exponential decomposition of a sampled signal: Lanczos
/// bidiagonalization of the Hankel matrix, signal poles by total least
/// squares on the shift-invariant subspace, amplitudes by least squares.
[[nodiscard]] std::vector<Mode> hlsvd_decompose(const Eigen::VectorXcd &samples, double dwell_s, int rank,
                                                Eigen::Index hankel_rows = 0);

/// Sum of modes on n samples.
[[nodiscard]] Eigen::VectorXcd synthesize_modes(const std::vector<Mode> &modes, Eigen::Index n, double dwell_s);

struct HlsvdResult {
  Fid clean;
  Fid water;
  std::vector<Mode> modes;
  std::vector<bool> in_band;
  bool flagged = false;  // no in-band mode was found
};

[[nodiscard]] HlsvdResult hlsvd_remove_water(const Fid &fid, const HlsvdConfig &cfg = {});

}  // namespace wumrsi::nuisance
