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

#include "wumrsi/mwf/biexp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"

namespace wumrsi::mwf {

void BiexpBounds::validate() const
{
  if (!(fast_min_ms > 0.0 && fast_min_ms < fast_max_ms && fast_max_ms <= slow_min_ms && slow_min_ms < slow_max_ms)) {
    throw InvalidArgument("biexp bounds must satisfy 0 < fast_min < fast_max <= slow_min < slow_max");
  }
}

double BiexpFit::mwf() const noexcept
{
  const double total = amp_fast + amp_slow;
  return total > 0.0 ? amp_fast / total : std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

std::vector<double> decay_basis(const std::vector<double> &te, double t2)
{
  std::vector<double> b(te.size());
  for (std::size_t k = 0; k < te.size(); ++k) {
    b[k] = std::exp(-te[k] / t2);
  }
  return b;
}

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += a[k] * b[k];
  }
  return s;
}

struct Amps {
  double a = 0.0;
  double b = 0.0;
  double sq_residual = 0.0;
};

// Two-column NNLS from the normal equations; yy = |y|^2.
Amps nnls2(double aa, double ab, double bb, double ay, double by, double yy)
{
  const auto cost = [&](double x, double z) { return yy - 2.0 * (x * ay + z * by) + x * x * aa + 2.0 * x * z * ab + z * z * bb; };
  Amps best{0.0, 0.0, yy};
  const double det = aa * bb - ab * ab;
  if (det > 1e-14 * aa * bb) {
    const double x = (bb * ay - ab * by) / det;
    const double z = (aa * by - ab * ay) / det;
    if (x >= 0.0 && z >= 0.0) {
      return {x, z, std::max(cost(x, z), 0.0)};
    }
  }
  if (aa > 0.0 && ay > 0.0) {
    const double x = ay / aa;
    const double c = cost(x, 0.0);
    if (c < best.sq_residual) {
      best = {x, 0.0, c};
    }
  }
  if (bb > 0.0 && by > 0.0) {
    const double z = by / bb;
    const double c = cost(0.0, z);
    if (c < best.sq_residual) {
      best = {0.0, z, c};
    }
  }
  best.sq_residual = std::max(best.sq_residual, 0.0);
  return best;
}

void check_decay(std::span<const double> decay, std::size_t n)
{
  if (decay.size() != n) {
    throw InvalidArgument("biexp: decay length does not match the echo times");
  }
  for (double v : decay) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("biexp: decay must be finite and non-negative");
    }
  }
}

// Nelder-Mead on a 2-vector; f handles its own bound clipping.
template <typename F>
std::array<double, 2> nelder_mead(F &&f, std::array<double, 2> x0, std::array<double, 2> step, int max_evals)
{
  std::array<std::array<double, 2>, 3> s{x0, {x0[0] + step[0], x0[1]}, {x0[0], x0[1] + step[1]}};
  std::array<double, 3> fv{f(s[0]), f(s[1]), f(s[2])};
  int evals = 3;
  while (evals < max_evals) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[static_cast<std::size_t>(a)] < fv[static_cast<std::size_t>(b)]; });
    const auto b = static_cast<std::size_t>(idx[0]);
    const auto m = static_cast<std::size_t>(idx[1]);
    const auto w = static_cast<std::size_t>(idx[2]);
    double diameter = 0.0;
    for (std::size_t k : {m, w}) {
      diameter = std::max(diameter, std::abs(s[k][0] - s[b][0]) + std::abs(s[k][1] - s[b][1]));
    }
    if (diameter < 1e-11) {
      break;
    }
    const std::array<double, 2> c{0.5 * (s[b][0] + s[m][0]), 0.5 * (s[b][1] + s[m][1])};
    const auto along = [&](double t) { return std::array<double, 2>{c[0] + t * (s[w][0] - c[0]), c[1] + t * (s[w][1] - c[1])}; };
    const auto xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < fv[b]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        s[w] = xe;
        fv[w] = fe;
      } else {
        s[w] = xr;
        fv[w] = fr;
      }
    } else if (fr < fv[m]) {
      s[w] = xr;
      fv[w] = fr;
    } else {
      const auto xc = fr < fv[w] ? along(-0.5) : along(0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fv[w])) {
        s[w] = xc;
        fv[w] = fc;
      } else {
        for (std::size_t k : {m, w}) {
          s[k] = {s[b][0] + 0.5 * (s[k][0] - s[b][0]), s[b][1] + 0.5 * (s[k][1] - s[b][1])};
          fv[k] = f(s[k]);
          ++evals;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < 3; ++k) {
    if (fv[k] < fv[best]) {
      best = k;
    }
  }
  return s[best];
}

}  // namespace

BiexpFitter::BiexpFitter(std::vector<double> te_ms, BiexpBounds bounds, std::size_t grid_points)
    : te_(std::move(te_ms)), bounds_(bounds)
{
  bounds_.validate();
  if (te_.size() < 4) {
    throw InvalidArgument("biexp: need at least 4 echoes");
  }
  for (std::size_t k = 0; k < te_.size(); ++k) {
    if (!std::isfinite(te_[k]) || (k > 0 && !(te_[k] > te_[k - 1]))) {
      throw InvalidArgument("biexp: echo times must be finite and strictly increasing");
    }
  }
  if (grid_points < 2) {
    throw InvalidArgument("biexp: grid needs at least 2 points per pool");
  }
  fast_grid_ = log_grid(bounds_.fast_min_ms, bounds_.fast_max_ms, grid_points);
  slow_grid_ = log_grid(bounds_.slow_min_ms, bounds_.slow_max_ms, grid_points);
  for (double t : fast_grid_) {
    fast_basis_.push_back(decay_basis(te_, t));
  }
  for (double t : slow_grid_) {
    slow_basis_.push_back(decay_basis(te_, t));
  }
}

MonoexpFit BiexpFitter::fit_single(std::span<const double> decay) const
{
  check_decay(decay, te_.size());
  const double yy = dot(decay, decay);
  MonoexpFit best{0.0, std::numeric_limits<double>::quiet_NaN(), std::sqrt(yy)};
  if (yy == 0.0) {
    return best;
  }
  const double lo = std::log(bounds_.fast_min_ms);
  const double hi = std::log(bounds_.slow_max_ms);
  const auto eval = [&](double logt, double &amp) {
    const auto b = decay_basis(te_, std::exp(std::clamp(logt, lo, hi)));
    const double bb = dot(b, b);
    const double by = dot(b, decay);
    amp = by > 0.0 ? by / bb : 0.0;
    return std::max(yy - amp * by, 0.0);
  };
  // Dense log grid, then golden-section refinement around the best node.
  constexpr int kGrid = 80;
  double best_cost = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < kGrid; ++k) {
    double amp = 0.0;
    const double c = eval(lo + (hi - lo) * k / (kGrid - 1), amp);
    if (c < best_cost) {
      best_cost = c;
      best_k = k;
    }
  }
  const double h = (hi - lo) / (kGrid - 1);
  double a = std::max(lo, lo + h * (best_k - 1));
  double b = std::min(hi, lo + h * (best_k + 1));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double amp = 0.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = eval(x1, amp);
  double f2 = eval(x2, amp);
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = eval(x1, amp);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = eval(x2, amp);
    }
  }
  double logt = 0.5 * (a + b);
  double c = eval(logt, amp);
  if (best_cost < c) {
    logt = lo + h * best_k;
    c = eval(logt, amp);
  }
  best.amplitude = amp;
  best.t2s_ms = std::exp(logt);
  best.residual_norm = std::sqrt(c);
  return best;
}

BiexpFit BiexpFitter::fit(std::span<const double> decay) const
{
  check_decay(decay, te_.size());
  const double norm = std::sqrt(dot(decay, decay));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (norm == 0.0) {
    return {0.0, nan, 0.0, nan, 0.0};
  }
  // Unit-norm data keep the search path independent of the signal scale.
  std::vector<double> unit(decay.begin(), decay.end());
  for (auto &v : unit) {
    v /= norm;
  }
  BiexpFit fit = fit_unit(unit);
  fit.amp_fast *= norm;
  fit.amp_slow *= norm;
  fit.residual_norm *= norm;
  return fit;
}

BiexpFit BiexpFitter::fit_unit(std::span<const double> decay) const
{
  const double yy = dot(decay, decay);

  std::vector<double> fy(fast_grid_.size());
  std::vector<double> ff(fast_grid_.size());
  for (std::size_t i = 0; i < fast_grid_.size(); ++i) {
    fy[i] = dot(fast_basis_[i], decay);
    ff[i] = dot(fast_basis_[i], fast_basis_[i]);
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t j = 0; j < slow_grid_.size(); ++j) {
    const double sy = dot(slow_basis_[j], decay);
    const double ss = dot(slow_basis_[j], slow_basis_[j]);
    for (std::size_t i = 0; i < fast_grid_.size(); ++i) {
      const Amps a = nnls2(ff[i], dot(fast_basis_[i], slow_basis_[j]), ss, fy[i], sy, yy);
      if (a.sq_residual < best) {
        best = a.sq_residual;
        bi = i;
        bj = j;
      }
    }
  }

  // Refinement in log time constants, clipped to the pool bounds.
  const std::array<double, 2> lo{std::log(bounds_.fast_min_ms), std::log(bounds_.slow_min_ms)};
  const std::array<double, 2> hi{std::log(bounds_.fast_max_ms), std::log(bounds_.slow_max_ms)};
  const auto solve = [&](const std::array<double, 2> &p, Amps &amps, std::array<double, 2> &t) {
    t = {std::exp(std::clamp(p[0], lo[0], hi[0])), std::exp(std::clamp(p[1], lo[1], hi[1]))};
    const auto bf = decay_basis(te_, t[0]);
    const auto bs = decay_basis(te_, t[1]);
    amps = nnls2(dot(bf, bf), dot(bf, bs), dot(bs, bs), dot(bf, decay), dot(bs, decay), yy);
    // Direct residual: the normal-equation form cancels badly near exact fits.
    double r2 = 0.0;
    for (std::size_t k = 0; k < decay.size(); ++k) {
      const double r = decay[k] - amps.a * bf[k] - amps.b * bs[k];
      r2 += r * r;
    }
    amps.sq_residual = r2;
    return r2;
  };
  const auto objective = [&](const std::array<double, 2> &p) {
    Amps a;
    std::array<double, 2> t{};
    return solve(p, a, t);
  };
  const std::array<double, 2> step{std::log(fast_grid_[1] / fast_grid_[0]), std::log(slow_grid_[1] / slow_grid_[0])};
  const auto p = nelder_mead(objective, {std::log(fast_grid_[bi]), std::log(slow_grid_[bj])}, step, 2000);
  Amps amps;
  std::array<double, 2> t{};
  double cost = solve(p, amps, t);
  if (best < cost) {
    cost = solve({std::log(fast_grid_[bi]), std::log(slow_grid_[bj])}, amps, t);
  }
  BiexpFit fit{amps.a, t[0], amps.b, t[1], std::sqrt(cost)};

  // Nested-model guarantee: fall back to the best single exponential.
  const MonoexpFit mono = fit_single(decay);
  if (mono.residual_norm < fit.residual_norm) {
    if (mono.t2s_ms <= bounds_.fast_max_ms) {
      fit = {mono.amplitude, mono.t2s_ms, 0.0, bounds_.slow_max_ms, mono.residual_norm};
    } else {
      fit = {0.0, bounds_.fast_min_ms, mono.amplitude, mono.t2s_ms, mono.residual_norm};
    }
  }
  return fit;
}

BiexpFit biexp_fit(std::span<const double> decay, std::span<const double> te_ms, const BiexpBounds &bounds)
{
  return BiexpFitter(std::vector<double>(te_ms.begin(), te_ms.end()), bounds).fit(decay);
}

}  // namespace wumrsi::mwf
