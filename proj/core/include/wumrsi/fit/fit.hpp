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

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wumrsi/fit/basis.hpp"

namespace wumrsi::fit {

struct FitConfig {
  double shift_bound_hz = 40.0;
  double damping_max_hz = 30.0;
  double grid_step_hz = 1.0;
  std::vector<double> damping_grid{0.0, 5.0, 15.0};
  int max_iterations = 200;
  double tolerance = 1e-12;  // relative objective change that ends the search
  bool nonnegative = true;
  double fwhm_peak_ppm = 2.01;

  void validate() const;
};

/// Global nuisance parameters of the model
///   mu(t) = exp(i phase) exp((i 2 pi shift - damping) t) sum_j a_j b_j(t).
struct GlobalParams {
  double shift_hz = 0.0;
  double phase_rad = 0.0;
  double damping_hz = 0.0;
};

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd amplitudes;
  double global_shift_hz = 0.0;
  double global_phase_rad = 0.0;
  double extra_damping_hz = 0.0;
  Eigen::VectorXd crlb_rel;  // percent, filled by compute_crlb
  Spectrum residual = Spectrum::zeros(AcquisitionParams{});
  double snr = std::numeric_limits<double>::quiet_NaN();
  double fwhm_ppm = std::numeric_limits<double>::quiet_NaN();
  double objective = 0.0;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;

  [[nodiscard]] GlobalParams globals() const { return {global_shift_hz, global_phase_rad, extra_damping_hz}; }
};

/// Separable least squares: non-negative amplitudes solved exactly for each
/// (shift, phase, damping); those three refined by projected BFGS from the
/// best point of a coarse grid. On iteration exhaustion the best iterate is
/// returned with converged = false.
[[nodiscard]] FitResult fit_spectrum(const Spectrum &x, const BasisSet &basis, const FitConfig &cfg = {});

[[nodiscard]] Eigen::VectorXcd model_fid(const BasisSet &basis, const Eigen::VectorXd &amplitudes,
                                         const GlobalParams &g);

/// d mu / d(a_1..a_J, shift, phase, damping), time domain, n x (J + 3).
[[nodiscard]] Eigen::MatrixXcd model_jacobian(const BasisSet &basis, const Eigen::VectorXd &amplitudes,
                                              const GlobalParams &g);

/// Relative CRLB (%) per metabolite from F = 2 Re(J^H J) / sigma^2, sigma the
/// complex noise standard deviation (E|n|^2 = sigma^2). Metabolites with zero
/// amplitude or in the null space of F get +inf.
[[nodiscard]] Eigen::VectorXd compute_crlb(const FitResult &fit, const BasisSet &basis, double noise_sigma);

}  // namespace wumrsi::fit
