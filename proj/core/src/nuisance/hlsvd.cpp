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

#include "wumrsi/nuisance/hlsvd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/hankel.hpp"

namespace wumrsi::nuisance {

namespace {

constexpr double kBreakdown = 1e-12;

// Two passes of classical Gram-Schmidt against the first k columns.
void reorthogonalize(Eigen::VectorXcd &x, const Eigen::MatrixXcd &basis, Eigen::Index k)
{
  if (k == 0) {
    return;
  }
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXcd c = basis.leftCols(k).adjoint() * x;
    x.noalias() -= basis.leftCols(k) * c;
  }
}

// Left singular subspace (rows x k) of the Hankel operator.
Eigen::MatrixXcd signal_subspace(const spectral::HankelOperator &h, int rank)
{
  const Eigen::Index l = h.rows();
  const Eigen::Index m = h.cols();
  const Eigen::Index max_steps = std::min<Eigen::Index>(std::min(l, m), static_cast<Eigen::Index>(rank) + 16);

  Eigen::MatrixXcd u(l, max_steps);
  Eigen::MatrixXcd v(m, max_steps + 1);
  Eigen::VectorXd alpha(max_steps);
  Eigen::VectorXd beta(max_steps);

  // Deterministic, generic start vector.
  Eigen::VectorXcd v0(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    v0(j) = std::polar(1.0, 0.7 * static_cast<double>(j * j % 97));
  }
  v.col(0) = v0.normalized();

  double scale = 0.0;
  Eigen::Index k = 0;
  for (; k < max_steps; ++k) {
    Eigen::VectorXcd uu = h.apply(v.col(k));
    if (k > 0) {
      uu -= beta(k - 1) * u.col(k - 1);
    }
    reorthogonalize(uu, u, k);
    alpha(k) = uu.norm();
    scale = std::max(scale, alpha(k));
    if (alpha(k) <= kBreakdown * scale || scale == 0.0) {
      break;
    }
    u.col(k) = uu / alpha(k);

    Eigen::VectorXcd vv = h.apply_adjoint(u.col(k)) - alpha(k) * v.col(k);
    reorthogonalize(vv, v, k + 1);
    beta(k) = vv.norm();
    scale = std::max(scale, beta(k));
    if (beta(k) <= kBreakdown * scale) {
      ++k;
      break;
    }
    v.col(k + 1) = vv / beta(k);
  }
  if (k == 0) {
    return Eigen::MatrixXcd(l, 0);
  }

  // Left singular vectors of the bidiagonal B are eigenvectors of the
  // tridiagonal B B^T.
  Eigen::VectorXd diag(k);
  Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index i = 0; i < k; ++i) {
    diag(i) = alpha(i) * alpha(i) + (i + 1 < k ? beta(i) * beta(i) : 0.0);
    if (i + 1 < k) {
      sub(i) = alpha(i + 1) * beta(i);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (tri.info() != Eigen::Success) {
    throw NumericalError("hlsvd: bidiagonal eigen-decomposition failed");
  }
  const Eigen::VectorXd ev = tri.eigenvalues().reverse();
  const Eigen::MatrixXd evec = tri.eigenvectors().rowwise().reverse();
  Eigen::Index keep = std::min<Eigen::Index>(rank, k);
  while (keep > 0 && !(ev(keep - 1) > kBreakdown * kBreakdown * ev(0))) {
    --keep;
  }
  return u.leftCols(k) * evec.leftCols(keep).cast<std::complex<double>>();
}

}  // namespace

void HlsvdConfig::validate() const
{
  if (rank < 1) {
    throw InvalidArgument("hlsvd: rank must be at least 1");
  }
  if (!(band_halfwidth_ppm > 0.0)) {
    throw InvalidArgument("hlsvd: band half width must be positive");
  }
  if (hankel_rows < 0) {
    throw InvalidArgument("hlsvd: hankel_rows must be non-negative");
  }
}

std::vector<Mode> hlsvd_decompose(const Eigen::VectorXcd &samples, double dwell_s, int rank,
                                  Eigen::Index hankel_rows)
{
  const Eigen::Index n = samples.size();
  if (n <= 2 * static_cast<Eigen::Index>(rank)) {
    throw InvalidArgument("hlsvd: n_points must exceed 2 * rank");
  }
  const Eigen::Index rows = hankel_rows > 0 ? hankel_rows : spectral::default_hankel_rows(n);
  if (samples.squaredNorm() == 0.0) {
    return {};
  }
  const spectral::HankelOperator h(std::span<const std::complex<double>>(samples.data(), static_cast<std::size_t>(n)),
                                   rows);
  const Eigen::MatrixXcd uk = signal_subspace(h, rank);
  const Eigen::Index k = uk.cols();
  if (k == 0) {
    return {};
  }

  // Total least squares on U_top Z = U_bot through the Gram matrix of
  // [U_top U_bot]; orthonormality of U gives the diagonal blocks cheaply.
  const Eigen::Index l = uk.rows();
  const Eigen::RowVectorXcd first = uk.row(0);
  const Eigen::RowVectorXcd last = uk.row(l - 1);
  Eigen::MatrixXcd gram(2 * k, 2 * k);
  gram.topLeftCorner(k, k) = Eigen::MatrixXcd::Identity(k, k) - last.adjoint() * last;
  gram.bottomRightCorner(k, k) = Eigen::MatrixXcd::Identity(k, k) - first.adjoint() * first;
  gram.topRightCorner(k, k) = uk.topRows(l - 1).adjoint() * uk.bottomRows(l - 1);
  gram.bottomLeftCorner(k, k) = gram.topRightCorner(k, k).adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> tls(gram);
  if (tls.info() != Eigen::Success) {
    throw NumericalError("hlsvd: total least squares decomposition failed");
  }
  // Right singular vectors in descending order of singular value.
  const Eigen::MatrixXcd vfull = tls.eigenvectors().rowwise().reverse();
  const Eigen::MatrixXcd v12 = vfull.block(0, k, k, k);
  const Eigen::MatrixXcd v22 = vfull.block(k, k, k, k);
  const Eigen::MatrixXcd z = -v12 * v22.fullPivLu().inverse();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(z, false);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("hlsvd: pole eigen-decomposition failed");
  }
  const Eigen::VectorXcd poles = eig.eigenvalues();
  if (!poles.allFinite()) {
    throw NumericalError("hlsvd: non-finite signal poles");
  }

  // Vandermonde least squares for complex amplitudes. Columns of growing
  // poles are referenced to the last sample so that none overflows.
  Eigen::MatrixXcd vand(n, k);
  Eigen::VectorXd ref(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    ref(j) = std::abs(poles(j)) > 1.0 ? static_cast<double>(n - 1) : 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      vand(t, j) = std::pow(poles(j), static_cast<double>(t) - ref(j));
    }
  }
  Eigen::VectorXcd amp = vand.householderQr().solve(samples);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (ref(j) > 0.0) {
      amp(j) *= std::pow(poles(j), -ref(j));
    }
  }
  if (!amp.allFinite()) {
    throw NumericalError("hlsvd: non-finite mode amplitudes");
  }

  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    Mode md;
    md.amplitude = amp(j);
    md.freq_hz = std::arg(poles(j)) / (2.0 * std::numbers::pi * dwell_s);
    md.damping_hz = -std::log(std::abs(poles(j))) / dwell_s;
    modes.push_back(md);
  }
  return modes;
}

Eigen::VectorXcd synthesize_modes(const std::vector<Mode> &modes, Eigen::Index n, double dwell_s)
{
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (const auto &md : modes) {
    if (md.amplitude == std::complex<double>(0.0)) {
      continue;
    }
    // log domain, so a tiny amplitude times a large growth stays finite
    const std::complex<double> log_amp = std::log(md.amplitude);
    const std::complex<double> s(-md.damping_hz, 2.0 * std::numbers::pi * md.freq_hz);
    for (Eigen::Index t = 0; t < n; ++t) {
      out(t) += std::exp(log_amp + s * (static_cast<double>(t) * dwell_s));
    }
  }
  return out;
}

HlsvdResult hlsvd_remove_water(const Fid &fid, const HlsvdConfig &cfg)
{
  cfg.validate();
  const auto &params = fid.params();
  const int decompose_rank =
      cfg.selection == ModeSelection::rank_then_band
          ? cfg.rank
          : static_cast<int>(std::min<Eigen::Index>(2 * cfg.rank, (fid.size() - 1) / 2));
  std::vector<Mode> modes = hlsvd_decompose(fid.samples(), params.dwell_s(), decompose_rank, cfg.hankel_rows);

  const double lo = cfg.band_center_ppm - cfg.band_halfwidth_ppm;
  const double hi = cfg.band_center_ppm + cfg.band_halfwidth_ppm;
  std::vector<bool> in_band(modes.size(), false);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double ppm = params.ppm_of_offset(modes[i].freq_hz);
    in_band[i] = ppm >= lo && ppm <= hi;
  }
  if (cfg.selection == ModeSelection::band_then_rank) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (in_band[i]) {
        idx.push_back(i);
      }
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(modes[a].amplitude) > std::abs(modes[b].amplitude);
    });
    for (std::size_t r = static_cast<std::size_t>(cfg.rank); r < idx.size(); ++r) {
      in_band[idx[r]] = false;
    }
  }

  std::vector<Mode> water_modes;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (in_band[i]) {
      water_modes.push_back(modes[i]);
    }
  }
  const Eigen::Index n = fid.size();
  Eigen::VectorXcd water = synthesize_modes(water_modes, n, params.dwell_s());
  if (!water.allFinite()) {
    throw NumericalError("hlsvd: non-finite water model");
  }
  Eigen::VectorXcd clean = fid.samples() - water;
  const bool flagged = water_modes.empty();
  return {Fid(std::move(clean), params), Fid(std::move(water), params), std::move(modes), std::move(in_band),
          flagged};
}

}  // namespace wumrsi::nuisance
