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

#include "wumrsi/fit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/nnls.hpp"
#include "wumrsi/fit/quality.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::fit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Evaluation {
  double f = 0.0;
  Eigen::VectorXd a;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  Eigen::VectorXcd mu;
};

class Problem
{
 public:
  Problem(const Eigen::VectorXcd &x, const BasisSet &basis, const FitConfig &cfg)
      : x_(x), b_(basis.fids()), cfg_(cfg), n_(x.size())
  {
    t_.resize(n_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      t_(k) = static_cast<double>(k) * basis.params().dwell_s();
    }
  }

  [[nodiscard]] Eigen::VectorXcd envelope(const GlobalParams &g) const
  {
    Eigen::VectorXcd e(n_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      e(k) = std::exp(std::complex<double>(-g.damping_hz * t_(k), g.phase_rad + kTwoPi * g.shift_hz * t_(k)));
    }
    return e;
  }

  [[nodiscard]] Eigen::MatrixXd gram(double damping) const
  {
    const Eigen::VectorXd w = (-2.0 * damping * t_).array().exp();
    return (b_.adjoint() * w.cast<std::complex<double>>().asDiagonal() * b_).real();
  }

  [[nodiscard]] Eigen::VectorXd solve_amplitudes(const Eigen::MatrixXd &gram, const Eigen::VectorXd &rhs) const
  {
    if (cfg_.nonnegative) {
      return nnls_gram(gram, rhs);
    }
    return gram.ldlt().solve(rhs);
  }

  [[nodiscard]] Evaluation evaluate(const GlobalParams &g, bool with_gradient) const
  {
    Evaluation ev;
    const Eigen::VectorXcd e = envelope(g);
    const Eigen::VectorXd rhs = (b_.adjoint() * e.conjugate().cwiseProduct(x_)).real();
    ev.a = solve_amplitudes(gram(g.damping_hz), rhs);
    ev.mu = e.cwiseProduct(b_ * ev.a.cast<std::complex<double>>());
    const Eigen::VectorXcd r = x_ - ev.mu;
    ev.f = r.squaredNorm();
    if (with_gradient) {
      // Variable projection: the amplitude partials drop out at the inner optimum.
      std::complex<double> s_shift = 0.0;
      std::complex<double> s_phase = 0.0;
      std::complex<double> s_damp = 0.0;
      for (Eigen::Index k = 0; k < n_; ++k) {
        const std::complex<double> rc = std::conj(r(k)) * ev.mu(k);
        s_shift += rc * std::complex<double>(0.0, kTwoPi * t_(k));
        s_phase += rc * std::complex<double>(0.0, 1.0);
        s_damp += rc * (-t_(k));
      }
      ev.grad = {-2.0 * s_shift.real(), -2.0 * s_phase.real(), -2.0 * s_damp.real()};
    }
    return ev;
  }

  /// Initial phase from the unconstrained complex least-squares amplitudes.
  [[nodiscard]] double phase_estimate(double shift, double damping, const Eigen::MatrixXcd &cgram) const
  {
    const Eigen::VectorXcd e = envelope({shift, 0.0, damping});
    const Eigen::VectorXcd rhs = b_.adjoint() * e.conjugate().cwiseProduct(x_);
    const Eigen::VectorXcd c = cgram.ldlt().solve(rhs);
    const std::complex<double> s = c.sum();
    return std::abs(s) > 0.0 ? std::arg(s) : 0.0;
  }

  [[nodiscard]] Eigen::MatrixXcd complex_gram(double damping) const
  {
    const Eigen::VectorXd w = (-2.0 * damping * t_).array().exp();
    return b_.adjoint() * w.cast<std::complex<double>>().asDiagonal() * b_;
  }

  /// Gauss-Newton Hessian of the model in (shift, phase, damping).
  [[nodiscard]] Eigen::Matrix3d gauss_newton(const Eigen::VectorXcd &mu) const
  {
    Eigen::MatrixXcd j(n_, 3);
    for (Eigen::Index k = 0; k < n_; ++k) {
      j(k, 0) = std::complex<double>(0.0, kTwoPi * t_(k)) * mu(k);
      j(k, 1) = std::complex<double>(0.0, 1.0) * mu(k);
      j(k, 2) = -t_(k) * mu(k);
    }
    return 2.0 * (j.adjoint() * j).real();
  }

 private:
  const Eigen::VectorXcd &x_;
  const Eigen::MatrixXcd &b_;
  const FitConfig &cfg_;
  Eigen::Index n_;
  Eigen::VectorXd t_;
};

Eigen::Vector3d to_vec(const GlobalParams &g)
{
  return {g.shift_hz, g.phase_rad, g.damping_hz};
}

GlobalParams from_vec(const Eigen::Vector3d &v)
{
  return {v(0), v(1), v(2)};
}

double wrap_phase(double p)
{
  return std::remainder(p, 2.0 * std::numbers::pi);
}

}  // namespace

void FitConfig::validate() const
{
  if (!(shift_bound_hz >= 0.0) || !(damping_max_hz >= 0.0) || !(grid_step_hz > 0.0)) {
    throw InvalidArgument("fit: bounds must be non-negative and grid step positive");
  }
  if (damping_grid.empty()) {
    throw InvalidArgument("fit: damping grid is empty");
  }
  if (max_iterations < 1) {
    throw InvalidArgument("fit: max_iterations must be positive");
  }
}

FitResult fit_spectrum(const Spectrum &x, const BasisSet &basis, const FitConfig &cfg)
{
  cfg.validate();
  if (!(x.params() == basis.params())) {
    throw InvalidArgument("fit: spectrum and basis axes differ");
  }
  const Eigen::VectorXcd xf = spectral::spectrum_to_fid(x).samples();
  const Problem prob(xf, basis, cfg);
  const Eigen::Vector3d lower(-cfg.shift_bound_hz, -std::numeric_limits<double>::infinity(), 0.0);
  const Eigen::Vector3d upper(cfg.shift_bound_hz, std::numeric_limits<double>::infinity(), cfg.damping_max_hz);
  auto project = [&](Eigen::Vector3d v) { return v.cwiseMax(lower).cwiseMin(upper); };

  // Coarse grid over (shift, damping) with phase from complex least squares.
  GlobalParams best{};
  double best_f = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::floor(cfg.shift_bound_hz / cfg.grid_step_hz + 1e-9));
  for (double damping : cfg.damping_grid) {
    damping = std::clamp(damping, 0.0, cfg.damping_max_hz);
    const Eigen::MatrixXcd cg = prob.complex_gram(damping);
    for (int s = -steps; s <= steps; ++s) {
      const double shift = s * cfg.grid_step_hz;
      const GlobalParams g{shift, prob.phase_estimate(shift, damping, cg), damping};
      const double f = prob.evaluate(g, false).f;
      if (f < best_f) {
        best_f = f;
        best = g;
      }
    }
  }

  // Projected BFGS over (shift, phase, damping).
  Eigen::Vector3d theta = project(to_vec(best));
  Evaluation cur = prob.evaluate(from_vec(theta), true);
  FitResult res;
  res.objective_trace.push_back(cur.f);
  auto initial_inverse = [&](const Evaluation &ev) {
    Eigen::Matrix3d h = prob.gauss_newton(ev.mu);
    const double ridge = 1e-10 * std::max(h.trace(), 1e-300);
    h += ridge * Eigen::Matrix3d::Identity();
    return Eigen::Matrix3d(h.inverse());
  };
  Eigen::Matrix3d hinv = initial_inverse(cur);
  if (!hinv.allFinite()) {
    hinv = Eigen::Matrix3d::Identity();
  }

  bool converged = cur.f == 0.0;
  int it = 0;
  for (; it < cfg.max_iterations && !converged; ++it) {
    // Variables held at a bound by the gradient are frozen for this step.
    Eigen::Vector3d free = Eigen::Vector3d::Ones();
    for (int i = 0; i < 3; ++i) {
      if ((theta(i) <= lower(i) && cur.grad(i) > 0.0) || (theta(i) >= upper(i) && cur.grad(i) < 0.0)) {
        free(i) = 0.0;
      }
    }
    const Eigen::Vector3d gfree = cur.grad.cwiseProduct(free);
    if (gfree.norm() == 0.0) {
      converged = true;
      break;
    }
    Eigen::Matrix3d hf = hinv;
    for (int i = 0; i < 3; ++i) {
      if (free(i) == 0.0) {
        hf.row(i).setZero();
        hf.col(i).setZero();
      }
    }
    Eigen::Vector3d d = -hf * gfree;
    if (gfree.dot(d) >= 0.0) {
      hinv = initial_inverse(cur);
      d = -(hinv.allFinite() ? hinv : Eigen::Matrix3d::Identity()) * gfree;
      d = d.cwiseProduct(free);
      if (gfree.dot(d) >= 0.0) {
        d = -gfree;
      }
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::Vector3d trial;
    Evaluation next;
    for (int ls = 0; ls < 50; ++ls) {
      trial = project(theta + step * d);
      next = prob.evaluate(from_vec(trial), true);
      if (next.f <= cur.f + 1e-4 * cur.grad.dot(trial - theta) && next.f <= cur.f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no descent possible from here: stationary to line-search precision
      break;
    }
    const Eigen::Vector3d s = trial - theta;
    const Eigen::Vector3d y = next.grad - cur.grad;
    const double sy = s.dot(y);
    const double fprev = cur.f;
    theta = trial;
    cur = std::move(next);
    res.objective_trace.push_back(cur.f);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
      hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    if (fprev - cur.f <= cfg.tolerance * std::max(fprev, 1e-300) || s.norm() < 1e-12) {
      converged = true;
    }
  }

  const GlobalParams g = from_vec(theta);
  res.names = basis.names();
  res.amplitudes = cur.a;
  res.global_shift_hz = g.shift_hz;
  res.global_phase_rad = wrap_phase(g.phase_rad);
  res.extra_damping_hz = g.damping_hz;
  res.crlb_rel = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(basis.size()),
                                           std::numeric_limits<double>::quiet_NaN());
  res.residual = spectral::fid_to_spectrum(spectral::Fid(xf - cur.mu, x.params()));
  res.objective = cur.f;
  res.iterations = it;
  res.converged = converged;
  try {
    res.snr = compute_snr(x);
  } catch (const InvalidArgument &) {
    res.snr = std::numeric_limits<double>::quiet_NaN();
  }
  res.fwhm_ppm = compute_fwhm(x, cfg.fwhm_peak_ppm);
  return res;
}

Eigen::VectorXcd model_fid(const BasisSet &basis, const Eigen::VectorXd &amplitudes, const GlobalParams &g)
{
  if (amplitudes.size() != static_cast<Eigen::Index>(basis.size())) {
    throw InvalidArgument("model: amplitude count does not match basis");
  }
  const Eigen::Index n = basis.fids().rows();
  const double dt = basis.params().dwell_s();
  Eigen::VectorXcd out = basis.fids() * amplitudes.cast<std::complex<double>>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    out(k) *= std::exp(std::complex<double>(-g.damping_hz * t, g.phase_rad + kTwoPi * g.shift_hz * t));
  }
  return out;
}

Eigen::MatrixXcd model_jacobian(const BasisSet &basis, const Eigen::VectorXd &amplitudes, const GlobalParams &g)
{
  const Eigen::Index n = basis.fids().rows();
  const auto nj = static_cast<Eigen::Index>(basis.size());
  const double dt = basis.params().dwell_s();
  const Eigen::VectorXcd mu = model_fid(basis, amplitudes, g);
  Eigen::MatrixXcd jac(n, nj + 3);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const std::complex<double> e =
        std::exp(std::complex<double>(-g.damping_hz * t, g.phase_rad + kTwoPi * g.shift_hz * t));
    for (Eigen::Index j = 0; j < nj; ++j) {
      jac(k, j) = e * basis.fids()(k, j);
    }
    jac(k, nj) = std::complex<double>(0.0, kTwoPi * t) * mu(k);
    jac(k, nj + 1) = std::complex<double>(0.0, 1.0) * mu(k);
    jac(k, nj + 2) = -t * mu(k);
  }
  return jac;
}

Eigen::VectorXd compute_crlb(const FitResult &fit, const BasisSet &basis, double noise_sigma)
{
  if (!(noise_sigma > 0.0)) {
    throw InvalidArgument("crlb: noise_sigma must be positive");
  }
  const auto nj = static_cast<Eigen::Index>(basis.size());
  const Eigen::MatrixXcd jac = model_jacobian(basis, fit.amplitudes, fit.globals());
  const Eigen::MatrixXd fisher = 2.0 * (jac.adjoint() * jac).real() / (noise_sigma * noise_sigma);
  Eigen::VectorXd out = Eigen::VectorXd::Constant(nj, std::numeric_limits<double>::infinity());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher);
  if (eig.info() != Eigen::Success) {
    return out;
  }
  const Eigen::VectorXd &lam = eig.eigenvalues();
  const Eigen::MatrixXd &vec = eig.eigenvectors();
  const double cut = std::max(lam.cwiseAbs().maxCoeff(), 1e-300) * 1e-13;
  Eigen::VectorXd variance = Eigen::VectorXd::Zero(nj);
  Eigen::VectorXd null_weight = Eigen::VectorXd::Zero(nj);
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    for (Eigen::Index j = 0; j < nj; ++j) {
      const double w = vec(j, i) * vec(j, i);
      if (lam(i) > cut) {
        variance(j) += w / lam(i);
      } else {
        null_weight(j) += w;
      }
    }
  }
  for (Eigen::Index j = 0; j < nj; ++j) {
    const double a = fit.amplitudes(j);
    if (a > 0.0 && null_weight(j) < 1e-8) {
      out(j) = 100.0 * std::sqrt(variance(j)) / a;
    }
  }
  return out;
}

}  // namespace wumrsi::fit
