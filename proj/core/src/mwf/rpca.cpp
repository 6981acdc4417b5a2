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

#include "wumrsi/mwf/rpca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/parallel.hpp"

namespace wumrsi::mwf {

void RpcaConfig::validate() const
{
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) {
    throw InvalidArgument("rpca: mu1 and mu2 must be positive");
  }
  if (!(rho > 0.0 && rho < 2.0)) {
    throw InvalidArgument("rpca: rho must lie in (0, 2)");
  }
  if (!(delta1 > 0.0) || !(delta2 > 0.0) || !(delta3 > 0.0)) {
    throw InvalidArgument("rpca: tolerances must be positive");
  }
  if (patch[0] == 0 || patch[1] == 0 || patch[2] == 0) {
    throw InvalidArgument("rpca: patch size must be positive");
  }
  if (!(lambda_s >= 0.0) || max_iterations == 0) {
    throw InvalidArgument("rpca: lambda_s must be non-negative and max_iterations positive");
  }
}

namespace {

// Singular values (descending) and right or left vectors through the smaller
// Gram matrix.
struct GramSvd {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd vectors;
  bool right = true;
};

GramSvd gram_svd(const Eigen::MatrixXd &x)
{
  GramSvd s;
  s.right = x.rows() >= x.cols();
  const Eigen::MatrixXd g = s.right ? Eigen::MatrixXd(x.transpose() * x) : Eigen::MatrixXd(x * x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  s.sigma = es.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
  s.vectors = es.eigenvectors().rowwise().reverse();
  return s;
}

// Singular value thresholding; returns the nuclear norm of the result.
double svt(const Eigen::MatrixXd &x, double tau, Eigen::MatrixXd &out)
{
  const GramSvd s = gram_svd(x);
  Eigen::Index keep = 0;
  while (keep < s.sigma.size() && s.sigma(keep) > tau) {
    ++keep;
  }
  if (keep == 0) {
    out.setZero(x.rows(), x.cols());
    return 0.0;
  }
  const Eigen::MatrixXd v = s.vectors.leftCols(keep);
  const Eigen::VectorXd shrink = (s.sigma.head(keep).array() - tau) / s.sigma.head(keep).array();
  if (s.right) {
    out = (x * v) * shrink.asDiagonal() * v.transpose();
  } else {
    out = v * shrink.asDiagonal() * (v.transpose() * x);
  }
  return (s.sigma.head(keep).array() - tau).sum();
}

double soft_l1(const Eigen::MatrixXd &x, double tau, Eigen::MatrixXd &out)
{
  out = x.unaryExpr([tau](double v) { return v > tau ? v - tau : (v < -tau ? v + tau : 0.0); });
  return out.cwiseAbs().sum();
}

double median(Eigen::VectorXd v)
{
  std::vector<double> s(v.data(), v.data() + v.size());
  const auto mid = s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2);
  std::nth_element(s.begin(), mid, s.end());
  return *mid;
}

}  // namespace

LowRankSparse rpca_decompose(const Eigen::MatrixXd &m, const RpcaConfig &cfg)
{
  cfg.validate();
  if (!m.allFinite()) {
    throw InvalidArgument("rpca: non-finite input");
  }
  LowRankSparse r;
  r.low_rank = m;
  r.sparse.setZero(m.rows(), m.cols());
  const double mnorm = m.norm();
  if (m.rows() < 2 || m.cols() < 2 || mnorm == 0.0) {
    r.converged = true;
    return r;
  }

  const GramSvd s = gram_svd(m);
  const auto rows = static_cast<double>(m.rows());
  const auto cols = static_cast<double>(m.cols());
  r.noise_sigma = median(s.sigma) / std::sqrt(std::max(rows, cols));
  // Noise-free data: nothing to separate. The Gram route resolves singular
  // values only down to about sqrt(eps) of the largest one.
  if (!(r.noise_sigma > 1e-6 * s.sigma(0))) {
    r.noise_sigma = 0.0;
    r.converged = true;
    return r;
  }
  const double scale = r.noise_sigma * (std::sqrt(rows) + std::sqrt(cols));
  const Eigen::MatrixXd mn = m / scale;
  const double nn = mn.norm();
  const double lambda = cfg.lambda_s > 0.0 ? cfg.lambda_s : 1.0 / std::sqrt(std::max(rows, cols));

  Eigen::MatrixXd l = mn;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  Eigen::MatrixXd z_old;
  double f_old = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    l = (cfg.mu2 * (mn - sp) + cfg.mu1 * (z - u)) / (cfg.mu1 + cfg.mu2);
    const double l1 = soft_l1(mn - l, lambda / cfg.mu2, sp);
    const Eigen::MatrixXd l_hat = cfg.rho * l + (1.0 - cfg.rho) * z;
    z_old = z;
    const double nuclear = svt(l_hat + u, 1.0 / cfg.mu1, z);
    u += l_hat - z;

    const double f = nuclear + lambda * l1 + 0.5 * cfg.mu2 * (mn - l - sp).squaredNorm();
    r.iterations = it + 1;
    r.primal_residual = (l - z).norm() / nn;
    r.dual_residual = cfg.mu1 * (z - z_old).norm() / nn;
    r.objective_change = std::abs(f - f_old) / std::max(std::abs(f), 1e-300);
    f_old = f;
    if (it > 0 && r.primal_residual < cfg.delta1 && r.dual_residual < cfg.delta2 &&
        r.objective_change < cfg.delta3) {
      r.converged = true;
      break;
    }
  }
  r.low_rank = z * scale;
  r.sparse = sp * scale;
  return r;
}

std::vector<std::size_t> patch_origins(std::size_t dim, std::size_t patch)
{
  const std::size_t stride = std::max<std::size_t>(1, patch / 2);
  std::vector<std::size_t> o{0};
  while (o.back() + patch < dim) {
    o.push_back(o.back() + stride);
  }
  return o;
}

RpcaResult rpca_denoise(const DecayVolume &vol, const RpcaConfig &cfg)
{
  vol.validate();
  cfg.validate();
  const Dims3 d = vol.dims();
  const std::size_t ne = vol.n_echoes();

  struct Patch {
    std::array<std::size_t, 3> origin;
    std::vector<std::size_t> voxels;
  };
  std::vector<Patch> patches;
  for (std::size_t oz : patch_origins(d.nz, cfg.patch[2])) {
    for (std::size_t oy : patch_origins(d.ny, cfg.patch[1])) {
      for (std::size_t ox : patch_origins(d.nx, cfg.patch[0])) {
        Patch p{{ox, oy, oz}, {}};
        for (std::size_t z = oz; z < std::min(d.nz, oz + cfg.patch[2]); ++z) {
          for (std::size_t y = oy; y < std::min(d.ny, oy + cfg.patch[1]); ++y) {
            for (std::size_t x = ox; x < std::min(d.nx, ox + cfg.patch[0]); ++x) {
              const std::size_t v = vol.mask.index(x, y, z);
              if (vol.mask[v] != 0) {
                p.voxels.push_back(v);
              }
            }
          }
        }
        if (!p.voxels.empty()) {
          patches.push_back(std::move(p));
        }
      }
    }
  }

  std::vector<LowRankSparse> results(patches.size());
  parallel_for(patches.size(), cfg.threads, [&](std::size_t i) {
    const auto &p = patches[i];
    Eigen::MatrixXd m(static_cast<Eigen::Index>(p.voxels.size()), static_cast<Eigen::Index>(ne));
    for (std::size_t r = 0; r < p.voxels.size(); ++r) {
      for (std::size_t e = 0; e < ne; ++e) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = vol.magnitude[e][p.voxels[r]];
      }
    }
    results[i] = rpca_decompose(m, cfg);
  });

  RpcaResult out;
  out.denoised = vol;
  std::vector<double> weight(d.size(), 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (vol.mask[v] != 0) {
        out.denoised.magnitude[e][v] = 0.0;
      }
    }
  }
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const auto &p = patches[i];
    const auto &res = results[i];
    for (std::size_t r = 0; r < p.voxels.size(); ++r) {
      weight[p.voxels[r]] += 1.0;
      for (std::size_t e = 0; e < ne; ++e) {
        out.denoised.magnitude[e][p.voxels[r]] += res.low_rank(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e));
      }
    }
    out.patches.push_back({p.origin, p.voxels.size(), res.iterations, res.primal_residual, res.dual_residual,
                           res.converged});
    out.unconverged += res.converged ? 0U : 1U;
  }
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (weight[v] > 0.0) {
        // The low-rank estimate can dip below zero where the signal is tiny.
        out.denoised.magnitude[e][v] = std::max(out.denoised.magnitude[e][v] / weight[v], 0.0);
      }
    }
  }
  return out;
}

}  // namespace wumrsi::mwf
