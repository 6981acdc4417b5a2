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

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::nuisance {

using spectral::Spectrum;

/// Mean |diag| of the operator targeted by autotune_beta.
inline constexpr double kDefaultDiagTarget = 0.938;

/// Eigen-structure of L L^H: orthonormal U (n x r) and eigenvalues lambda.
struct LipidFactor {
  Eigen::MatrixXcd u;
  Eigen::VectorXd lambda;
  Eigen::Index n = 0;

  /// mean |diag((I + beta L L^H)^-1)|.
  [[nodiscard]] double mean_abs_diag(double beta) const;
};

[[nodiscard]] LipidFactor factorize_lipid_basis(const Eigen::MatrixXcd &basis);

/// Lipid-suppression operator (I + beta L L^H)^-1 acting on spectra.
///
/// Stored through the factorization of L L^H so that applying it costs
/// O(n r); dense() materializes the n x n matrix when needed.
class LipidOperator
{
 public:
  /// basis columns are skull spectra (n x m).
  LipidOperator(const Eigen::MatrixXcd &basis, double beta);
  LipidOperator(std::shared_ptr<const LipidFactor> factor, double beta);

  [[nodiscard]] static LipidOperator from_spectra(const std::vector<Spectrum> &skull, double beta);

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return factor_->n; }
  [[nodiscard]] Eigen::Index rank() const noexcept { return factor_->lambda.size(); }
  [[nodiscard]] const LipidFactor &factor() const noexcept { return *factor_; }
  [[nodiscard]] LipidOperator with_beta(double beta) const;

  /// L x
  [[nodiscard]] Eigen::VectorXcd suppress(const Eigen::VectorXcd &x) const;
  /// (I - L) x
  [[nodiscard]] Eigen::VectorXcd project(const Eigen::VectorXcd &x) const;
  /// Columnwise L X.
  [[nodiscard]] Eigen::MatrixXcd suppress_columns(const Eigen::MatrixXcd &x) const;

  [[nodiscard]] Eigen::MatrixXcd dense() const;
  [[nodiscard]] Eigen::VectorXd diagonal() const;
  [[nodiscard]] double mean_abs_diag() const { return factor_->mean_abs_diag(beta_); }
  /// All n eigenvalues, ascending.
  [[nodiscard]] Eigen::VectorXd eigenvalues() const;

 private:
  std::shared_ptr<const LipidFactor> factor_;
  double beta_;
  Eigen::VectorXd shrink_;  // beta lambda / (1 + beta lambda)
};

struct AutotuneResult {
  double beta = 0.0;
  double mean_abs_diag = 1.0;
  int iterations = 0;
};

/// Bisection in log(beta) on the decreasing map beta -> mean|diag|. Throws
/// TargetUnreachable with the achievable interval when the basis rank cannot
/// pull the mean below the target.
[[nodiscard]] AutotuneResult autotune_beta(const LipidFactor &factor, double target = kDefaultDiagTarget,
                                           double tolerance = 1e-3);
[[nodiscard]] double autotune_beta(const Eigen::MatrixXcd &basis, double target = kDefaultDiagTarget);

[[nodiscard]] Spectrum apply_lipid_suppression(const Spectrum &x, const LipidOperator &op);
[[nodiscard]] Spectrum apply_lipid_projection(const Spectrum &x, const LipidOperator &op);

}  // namespace wumrsi::nuisance
