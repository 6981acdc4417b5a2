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

#include "wumrsi/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"

namespace wumrsi::eval {
namespace {

template <typename T>
double nrmse_impl(std::span<const T> est, std::span<const T> truth)
{
  if (est.size() != truth.size()) {
    throw InvalidArgument("nrmse: length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    num += std::norm(est[i] - truth[i]);
    den += std::norm(truth[i]);
  }
  if (!(den > 0.0)) {
    throw InvalidArgument("nrmse: truth has zero norm");
  }
  return 100.0 * std::sqrt(num / den);
}

}  // namespace

double nrmse(std::span<const std::complex<double>> est, std::span<const std::complex<double>> truth)
{
  return nrmse_impl(est, truth);
}

double nrmse(std::span<const double> est, std::span<const double> truth)
{
  return nrmse_impl(est, truth);
}

double nrmse(const spectral::Spectrum &est, const spectral::Spectrum &truth, double lo_ppm, double hi_ppm)
{
  spectral::require_same_axis(est, truth, "nrmse");
  const spectral::IndexRange r = spectral::ppm_window(truth.params(), lo_ppm, hi_ppm);
  if (r.size() == 0) {
    throw InvalidArgument("nrmse: ppm window contains no bins");
  }
  const auto n = static_cast<std::size_t>(r.size());
  return nrmse_impl<std::complex<double>>({est.bins().data() + r.begin, n}, {truth.bins().data() + r.begin, n});
}

double nrmse_full(const spectral::Spectrum &est, const spectral::Spectrum &truth)
{
  spectral::require_same_axis(est, truth, "nrmse");
  const auto n = static_cast<std::size_t>(truth.size());
  return nrmse_impl<std::complex<double>>({est.bins().data(), n}, {truth.bins().data(), n});
}

double nrmse(const Volume<double> &est, const Volume<double> &truth, const Mask &mask)
{
  require_same_grid(est, truth, "nrmse");
  require_same_grid(est, mask, "nrmse");
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0) {
      a.push_back(est[i]);
      b.push_back(truth[i]);
    }
  }
  return nrmse_impl<double>(a, b);
}

std::string to_string(Difference d)
{
  return d == Difference::absolute ? "absolute" : "percent";
}

Difference parse_difference(const std::string &s)
{
  if (s == "absolute") {
    return Difference::absolute;
  }
  if (s == "percent") {
    return Difference::percent;
  }
  throw InvalidArgument("unknown difference mode '" + s + "' (expected absolute or percent)");
}

BlandAltman bland_altman(std::span<const double> a, std::span<const double> b, Difference difference)
{
  if (a.size() != b.size()) {
    throw InvalidArgument("bland_altman: length mismatch");
  }
  BlandAltman ba;
  ba.difference = difference;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      continue;
    }
    const double mean = 0.5 * (a[i] + b[i]);
    double d = a[i] - b[i];
    if (difference == Difference::percent) {
      if (a[i] + b[i] == 0.0) {
        continue;
      }
      d = 200.0 * d / (a[i] + b[i]);
    }
    ba.pairs.emplace_back(mean, d);
  }
  ba.n = ba.pairs.size();
  if (ba.n < 2) {
    throw InvalidArgument("bland_altman: fewer than 2 finite pairs");
  }
  double s = 0.0;
  for (const auto &p : ba.pairs) {
    s += p.second;
  }
  ba.bias = s / static_cast<double>(ba.n);
  double ss = 0.0;
  for (const auto &p : ba.pairs) {
    ss += (p.second - ba.bias) * (p.second - ba.bias);
  }
  ba.sd = std::sqrt(ss / static_cast<double>(ba.n - 1));
  ba.loa_low = ba.bias - 1.96 * ba.sd;
  ba.loa_high = ba.bias + 1.96 * ba.sd;
  return ba;
}

Summary summarize(std::span<const double> values)
{
  std::vector<double> v;
  for (double x : values) {
    if (std::isfinite(x)) {
      v.push_back(x);
    }
  }
  Summary s;
  s.n = v.size();
  if (v.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean = s.median = s.q1 = s.q3 = s.min = s.max = nan;
    return s;
  }
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) {
    total += x;
  }
  s.mean = total / static_cast<double>(v.size());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.median = quantile(0.5);
  s.q1 = quantile(0.25);
  s.q3 = quantile(0.75);
  s.min = v.front();
  s.max = v.back();
  return s;
}

}  // namespace wumrsi::eval
