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

#include "wumrsi/nuisance/lipid_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"

namespace wumrsi::nuisance {

double LipidFactor::mean_abs_diag(double beta) const
{
  if (n == 0) {
    return 1.0;
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double bl = beta * lambda(i);
    s += bl / (1.0 + bl);
  }
  return 1.0 - s / static_cast<double>(n);
}

LipidFactor factorize_lipid_basis(const Eigen::MatrixXcd &basis)
{
  if (basis.cols() == 0 || basis.rows() == 0) {
    throw InvalidArgument("lipid operator: empty basis");
  }
  if (!basis.allFinite()) {
    throw InvalidArgument("lipid operator: non-finite basis");
  }
  LipidFactor f;
  f.n = basis.rows();
  Eigen::MatrixXcd u;
  Eigen::VectorXd lambda;
  if (basis.cols() < basis.rows()) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(basis, Eigen::ComputeThinU);
    u = svd.matrixU();
    lambda = svd.singularValues().array().square();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(basis * basis.adjoint());
    if (eig.info() != Eigen::Success) {
      throw NumericalError("lipid operator: eigen-decomposition failed");
    }
    // Descending order to match the SVD branch.
    u = eig.eigenvectors().rowwise().reverse();
    lambda = eig.eigenvalues().reverse().cwiseMax(0.0);
  }
  const double top = lambda.size() > 0 ? lambda(0) : 0.0;
  const double cut = top * std::numeric_limits<double>::epsilon() * static_cast<double>(basis.rows() + basis.cols());
  Eigen::Index r = 0;
  while (r < lambda.size() && lambda(r) > cut && lambda(r) > 0.0) {
    ++r;
  }
  f.u = u.leftCols(r);
  f.lambda = lambda.head(r);
  return f;
}

LipidOperator::LipidOperator(const Eigen::MatrixXcd &basis, double beta)
    : LipidOperator(std::make_shared<const LipidFactor>(factorize_lipid_basis(basis)), beta)
{
}

LipidOperator::LipidOperator(std::shared_ptr<const LipidFactor> factor, double beta)
    : factor_(std::move(factor)), beta_(beta)
{
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
    throw InvalidArgument("lipid operator: beta must be finite and non-negative");
  }
  shrink_ = (beta_ * factor_->lambda.array() / (1.0 + beta_ * factor_->lambda.array())).matrix();
}

LipidOperator LipidOperator::from_spectra(const std::vector<Spectrum> &skull, double beta)
{
  if (skull.empty()) {
    throw InvalidArgument("lipid operator: no skull spectra");
  }
  Eigen::MatrixXcd basis(skull.front().size(), static_cast<Eigen::Index>(skull.size()));
  for (std::size_t i = 0; i < skull.size(); ++i) {
    spectral::require_same_axis(skull.front(), skull[i], "lipid operator");
    basis.col(static_cast<Eigen::Index>(i)) = skull[i].bins();
  }
  return {basis, beta};
}

LipidOperator LipidOperator::with_beta(double beta) const
{
  return {factor_, beta};
}

Eigen::VectorXcd LipidOperator::suppress(const Eigen::VectorXcd &x) const
{
  if (x.size() != size()) {
    throw InvalidArgument("lipid operator: length mismatch");
  }
  if (rank() == 0) {
    return x;
  }
  const Eigen::VectorXcd c = factor_->u.adjoint() * x;
  return x - factor_->u * (shrink_.cast<std::complex<double>>().asDiagonal() * c);
}

Eigen::VectorXcd LipidOperator::project(const Eigen::VectorXcd &x) const
{
  if (x.size() != size()) {
    throw InvalidArgument("lipid operator: length mismatch");
  }
  if (rank() == 0) {
    return Eigen::VectorXcd::Zero(x.size());
  }
  const Eigen::VectorXcd c = factor_->u.adjoint() * x;
  return factor_->u * (shrink_.cast<std::complex<double>>().asDiagonal() * c);
}

Eigen::MatrixXcd LipidOperator::suppress_columns(const Eigen::MatrixXcd &x) const
{
  if (x.rows() != size()) {
    throw InvalidArgument("lipid operator: length mismatch");
  }
  if (rank() == 0) {
    return x;
  }
  const Eigen::MatrixXcd c = factor_->u.adjoint() * x;
  return x - factor_->u * (shrink_.cast<std::complex<double>>().asDiagonal() * c);
}

Eigen::MatrixXcd LipidOperator::dense() const
{
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(size(), size());
  if (rank() > 0) {
    op -= factor_->u * shrink_.cast<std::complex<double>>().asDiagonal() * factor_->u.adjoint();
  }
  return op;
}

Eigen::VectorXd LipidOperator::diagonal() const
{
  Eigen::VectorXd d = Eigen::VectorXd::Ones(size());
  for (Eigen::Index i = 0; i < rank(); ++i) {
    d -= shrink_(i) * factor_->u.col(i).cwiseAbs2();
  }
  return d;
}

Eigen::VectorXd LipidOperator::eigenvalues() const
{
  Eigen::VectorXd ev = Eigen::VectorXd::Ones(size());
  for (Eigen::Index i = 0; i < rank(); ++i) {
    ev(i) = 1.0 / (1.0 + beta_ * factor_->lambda(i));
  }
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

AutotuneResult autotune_beta(const LipidFactor &factor, double target, double tolerance)
{
  const double floor = 1.0 - static_cast<double>(factor.lambda.size()) / static_cast<double>(factor.n);
  if (factor.lambda.size() == 0 || floor > target - tolerance) {
    throw TargetUnreachable("autotune_beta: mean|diag| cannot reach the target; basis rank too low", floor, 1.0);
  }
  if (target >= 1.0) {
    return {0.0, 1.0, 0};
  }
  AutotuneResult res;
  double lo = 1.0 / factor.lambda.mean();
  double hi = lo;
  while (factor.mean_abs_diag(lo) < target) {
    lo /= 10.0;
    ++res.iterations;
  }
  while (factor.mean_abs_diag(hi) > target) {
    hi *= 10.0;
    ++res.iterations;
    if (!std::isfinite(hi)) {
      throw TargetUnreachable("autotune_beta: bracket expansion overflowed", floor, 1.0);
    }
  }
  double mid = std::sqrt(lo * hi);
  for (int it = 0; it < 200; ++it) {
    mid = std::sqrt(lo * hi);
    const double g = factor.mean_abs_diag(mid);
    ++res.iterations;
    if (std::abs(g - target) < 1e-9 * tolerance || hi / lo - 1.0 < 1e-14) {
      break;
    }
    if (g > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.beta = mid;
  res.mean_abs_diag = factor.mean_abs_diag(mid);
  return res;
}

double autotune_beta(const Eigen::MatrixXcd &basis, double target)
{
  const LipidFactor f = factorize_lipid_basis(basis);
  return autotune_beta(f, target).beta;
}

Spectrum apply_lipid_suppression(const Spectrum &x, const LipidOperator &op)
{
  return {op.suppress(x.bins()), x.params()};
}

Spectrum apply_lipid_projection(const Spectrum &x, const LipidOperator &op)
{
  return {op.project(x.bins()), x.params()};
}

}  // namespace wumrsi::nuisance
