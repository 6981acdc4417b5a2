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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "wumrsi/common/error.hpp"
#include "wumrsi/common/rng.hpp"
#include "wumrsi/fit/fit.hpp"
#include "wumrsi/fit/fit_volume.hpp"
#include "wumrsi/fit/quality.hpp"
#include "wumrsi/fit/quantify.hpp"
#include "wumrsi/phantom/simulate.hpp"
#include "wumrsi/phantom/volume_phantom.hpp"
#include "wumrsi/spectral/fourier.hpp"

using namespace wumrsi;
using namespace wumrsi::fit;
using spectral::fid_to_spectrum;
using spectral::Fid;

namespace {

Spectrum spectrum_of(const BasisSet &basis, const Eigen::VectorXd &a, const GlobalParams &g = {})
{
  return fid_to_spectrum(Fid(model_fid(basis, a, g), basis.params()));
}

Eigen::VectorXd panel_amplitudes(const BasisSet &basis)
{
  Eigen::VectorXd a(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    double s = 0.0;
    for (const auto &r : phantom::default_metabolite_panel()) {
      if (r.name == basis.names()[j]) {
        s += r.amplitude;
      }
    }
    a(static_cast<Eigen::Index>(j)) = s;
  }
  return a;
}

Spectrum lorentzian(double damping_hz, double ppm, double amp = 1.0)
{
  AcquisitionParams p;
  p.n_points = 2048;
  return fid_to_spectrum(Fid(phantom::synthesize({{"x", ppm, amp, damping_hz, 0.0}}, p), p));
}

}  // namespace

TEST(Basis, DefaultPanelGroupsLines)
{
  const AcquisitionParams p;
  const auto b = default_basis(p, true);
  EXPECT_EQ(b.names().size(), b.size());
  EXPECT_NO_THROW((void)b.index_of("NAA"));
  EXPECT_NO_THROW((void)b.index_of("2HG"));
  EXPECT_THROW((void)b.index_of("GABA"), InvalidArgument);
  const auto healthy = default_basis(p, false);
  EXPECT_EQ(healthy.size() + 1, b.size());
  EXPECT_THROW((void)healthy.index_of("2HG"), InvalidArgument);
}

TEST(FitSpectrum, ExactCombinationRecovered)
{
  const AcquisitionParams p;
  const auto basis = default_basis(p);
  const auto a = panel_amplitudes(basis);
  const auto x = spectrum_of(basis, a);
  const auto r = fit_spectrum(x, basis);
  EXPECT_LT(((r.amplitudes - a).array().abs() / a.array()).maxCoeff(), 1e-4);
  EXPECT_LT(r.residual.bins().squaredNorm() / x.bins().squaredNorm(), 1e-8);
  EXPECT_TRUE(r.converged);
}

TEST(FitSpectrum, ShiftRecovered)
{
  const AcquisitionParams p;
  const auto basis = default_basis(p);
  const auto a = panel_amplitudes(basis);
  const auto r = fit_spectrum(spectrum_of(basis, a, {10.0, 0.0, 0.0}), basis);
  EXPECT_NEAR(r.global_shift_hz, 10.0, 0.5);
}

TEST(FitSpectrum, ZeroInputGivesZeroAmplitudes)
{
  const AcquisitionParams p;
  const auto r = fit_spectrum(Spectrum::zeros(p), default_basis(p));
  EXPECT_EQ(r.amplitudes.norm(), 0.0);
}

TEST(FitSpectrum, ObjectiveTraceMonotone)
{
  const AcquisitionParams p;
  const auto basis = default_basis(p);
  Rng rng = substream(1, "test.fit.noise");
  const Eigen::VectorXcd noise = phantom::complex_noise(451, 0.05, rng);
  const auto x = fid_to_spectrum(
      Fid(model_fid(basis, panel_amplitudes(basis), {-7.0, 0.4, 3.0}) + noise, p));
  const auto r = fit_spectrum(x, basis);
  ASSERT_GE(r.objective_trace.size(), 2U);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
    EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] * (1.0 + 1e-12));
  }
  EXPECT_NEAR(r.objective, r.objective_trace.back(), 1e-12 * r.objective);
}

TEST(FitSpectrum, ShiftEquivarianceProperty)
{
  const AcquisitionParams p;
  const auto basis = default_basis(p);
  const auto a = panel_amplitudes(basis);
  for (double df : {-25.0, -8.5, 3.0, 17.0, 33.0}) {
    const auto r = fit_spectrum(spectrum_of(basis, a, {df, 0.2, 2.0}), basis);
    EXPECT_NEAR(r.global_shift_hz, df, 0.5) << df;
    EXPECT_LT(((r.amplitudes - a).array().abs() / a.array()).maxCoeff(), 0.01) << df;
  }
}

TEST(FitSpectrum, AxisMismatchAndBadConfigRejected)
{
  AcquisitionParams q;
  q.n_points = 64;
  EXPECT_THROW((void)fit_spectrum(Spectrum::zeros(q), default_basis(AcquisitionParams{})), InvalidArgument);
  FitConfig cfg;
  cfg.damping_max_hz = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(FitJacobian, MatchesCentralDifferences)
{
  const AcquisitionParams p;
  const auto basis = default_basis(p);
  const auto a = panel_amplitudes(basis);
  const GlobalParams g{4.0, 0.3, 6.0};
  const auto j = model_jacobian(basis, a, g);
  const auto na = a.size();
  ASSERT_EQ(j.cols(), na + 3);
  for (Eigen::Index c = 0; c < j.cols(); ++c) {
    const double h = c < na ? 1e-6 : 1e-6;
    Eigen::VectorXd ap = a;
    Eigen::VectorXd am = a;
    GlobalParams gp = g;
    GlobalParams gm = g;
    if (c < na) {
      ap(c) += h;
      am(c) -= h;
    } else if (c == na) {
      gp.shift_hz += h;
      gm.shift_hz -= h;
    } else if (c == na + 1) {
      gp.phase_rad += h;
      gm.phase_rad -= h;
    } else {
      gp.damping_hz += h;
      gm.damping_hz -= h;
    }
    const Eigen::VectorXcd fd = (model_fid(basis, ap, gp) - model_fid(basis, am, gm)) / (2.0 * h);
    EXPECT_LT((fd - j.col(c)).norm() / j.col(c).norm(), 1e-4) << "column " << c;
  }
}

TEST(Crlb, ScalesLinearlyWithSigmaAndFlagsZeroAmplitude)
{
  const AcquisitionParams p;
  const auto basis = default_basis(p);
  Eigen::VectorXd a = panel_amplitudes(basis);
  a(static_cast<Eigen::Index>(basis.index_of("2HG"))) = 0.0;
  auto r = fit_spectrum(spectrum_of(basis, a), basis);
  const auto c1 = compute_crlb(r, basis, 0.01);
  const auto c2 = compute_crlb(r, basis, 0.02);
  for (Eigen::Index k = 0; k < c1.size(); ++k) {
    if (std::isfinite(c1(k))) {
      EXPECT_NEAR(c2(k), 2.0 * c1(k), 1e-9 * c1(k));
    }
  }
  EXPECT_TRUE(std::isinf(c1(static_cast<Eigen::Index>(basis.index_of("2HG")))));
  EXPECT_THROW((void)compute_crlb(r, basis, 0.0), InvalidArgument);
}

TEST(Crlb, MonteCarloSingleMetabolite)
{
  const AcquisitionParams p;
  const auto basis = make_basis({{"NAA", 2.01, 1.0, 10.0, 0.0}}, p);
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, 1.0);
  const Eigen::VectorXcd clean = model_fid(basis, a, {});
  const double sigma = 0.5;
  const auto ref = fit_spectrum(fid_to_spectrum(Fid(clean, p)), basis);
  const double predicted = compute_crlb(ref, basis, sigma)(0) / 100.0;
  std::vector<double> est;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng = substream(21, "test.crlb", i);
    est.push_back(fit_spectrum(fid_to_spectrum(Fid(clean + phantom::complex_noise(451, sigma, rng), p)), basis)
                      .amplitudes(0));
  }
  double mean = 0.0;
  for (double e : est) {
    mean += e;
  }
  mean /= static_cast<double>(est.size());
  double var = 0.0;
  for (double e : est) {
    var += (e - mean) * (e - mean);
  }
  const double sd = std::sqrt(var / static_cast<double>(est.size() - 1));
  EXPECT_NEAR(sd, predicted, 0.2 * predicted);
}

TEST(Quality, SnrOfPureNoiseIsSmall)
{
  const AcquisitionParams p;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = substream(3, "test.snr", i);
    const auto x = fid_to_spectrum(Fid(phantom::complex_noise(451, 1.0, rng), p));
    EXPECT_LT(compute_snr(x), 6.0);
  }
}

TEST(Quality, SnrInfiniteWithoutNoiseAndLinearInSignal)
{
  const AcquisitionParams p;
  // A peak confined to the signal band, so the noise band holds noise only.
  const auto band = spectral::ppm_window(p, 1.95, 2.05);
  Eigen::VectorXcd peak = Eigen::VectorXcd::Zero(451);
  for (std::size_t k = band.begin; k < band.end; ++k) {
    peak(static_cast<Eigen::Index>(k)) = {5.0, -2.0};
  }
  const Spectrum s(peak, p);
  EXPECT_TRUE(std::isinf(compute_snr(s)));
  Rng rng = substream(4, "test.snr2");
  Eigen::VectorXcd n = fid_to_spectrum(Fid(phantom::complex_noise(451, 1e-3, rng), p)).bins();
  for (std::size_t k = band.begin; k < band.end; ++k) {
    n(static_cast<Eigen::Index>(k)) = 0.0;
  }
  const double snr1 = compute_snr(Spectrum(s.bins() + n, p));
  const double snr2 = compute_snr(Spectrum(2.0 * s.bins() + n, p));
  EXPECT_NEAR(snr2 / snr1, 2.0, 1e-12);
}

TEST(Quality, NoiseBandFallsBackOnShortAxis)
{
  AcquisitionParams p;
  p.bandwidth_hz = 1500.0;  // 8.5-10.5 ppm lies beyond the axis
  const auto r = noise_band(p);
  EXPECT_GE(r.size(), 16U);
  const auto ppm = spectral::make_ppm_axis(p);
  for (std::size_t k = r.begin; k < r.end; ++k) {
    const double v = ppm(static_cast<Eigen::Index>(k));
    EXPECT_TRUE(v < 1.8 || v > 4.2) << v;
  }
}

TEST(Quality, FwhmOfLorentzian)
{
  const double w1 = compute_fwhm(lorentzian(14.7, 2.01), 2.01);
  EXPECT_NEAR(w1, 14.7 / std::numbers::pi / 297.2, 0.05 * 0.01575);
  const double w2 = compute_fwhm(lorentzian(29.4, 2.01), 2.01);
  EXPECT_NEAR(w2 / w1, 2.0, 0.1);
  AcquisitionParams p;
  p.n_points = 2048;
  EXPECT_TRUE(std::isnan(compute_fwhm(Spectrum::zeros(p), 2.01)));
}

TEST(Quantify, ClosedFormsAndBlochOracle)
{
  QuantifyParams q;
  q.t1_met_ms = q.t1_water_ms = 1700.0;
  EXPECT_NEAR(quantify_absolute(2.5, 2.5, q), q.water_conc_mM, 1e-9 * q.water_conc_mM);
  QuantifyParams slow;
  slow.tr_ms = 1e7;
  const double r_ratio = steady_state_factor(slow.t1_water_ms, slow.tr_ms, slow.flip_deg) /
                         steady_state_factor(slow.t1_met_ms, slow.tr_ms, slow.flip_deg);
  EXPECT_NEAR(r_ratio, 1.0, 1e-12);

  // Bloch oracle: instantaneous pulses, T1 recovery, ideal spoiling, iterated
  // to the steady state.
  const auto bloch = [](double t1, double tr, double flip_deg) {
    const double a = flip_deg * std::numbers::pi / 180.0;
    double mz = 1.0;
    double signal = 0.0;
    for (int i = 0; i < 2000; ++i) {
      signal = mz * std::sin(a);
      mz = mz * std::cos(a);
      mz = 1.0 + (mz - 1.0) * std::exp(-tr / t1);
    }
    return signal;
  };
  const QuantifyParams d;
  EXPECT_NEAR(steady_state_factor(d.t1_met_ms, d.tr_ms, d.flip_deg), bloch(d.t1_met_ms, d.tr_ms, d.flip_deg), 1e-12);
  const double expected = (1.0 / 0.8) * d.water_conc_mM * bloch(d.t1_water_ms, d.tr_ms, d.flip_deg) /
                          bloch(d.t1_met_ms, d.tr_ms, d.flip_deg);
  EXPECT_NEAR(quantify_absolute(1.0, 0.8, d), expected, 1e-9 * expected);
  EXPECT_TRUE(std::isnan(quantify_absolute(1.0, 0.0, d)));
}

TEST(Quantify, HomogeneityProperty)
{
  const QuantifyParams d;
  for (double k : {0.1, 2.0, 37.0}) {
    EXPECT_NEAR(quantify_absolute(k * 1.3, 0.7, d), k * quantify_absolute(1.3, 0.7, d), 1e-9 * k);
    EXPECT_NEAR(quantify_absolute(1.3, k * 0.7, d), quantify_absolute(1.3, 0.7, d) / k, 1e-6);
  }
  const Volume<double> m(Dims3{2, 1, 1}, {1, 1, 1}, 1.0);
  const Volume<double> w(Dims3{3, 1, 1}, {1, 1, 1}, 1.0);
  EXPECT_THROW((void)quantify_absolute(m, w, d), InvalidArgument);
}

TEST(FitVolume, BrainVoxelsFittedNanElsewhere)
{
  phantom::VolumePhantomConfig c;
  c.dims = {6, 6, 4};
  const auto ph = phantom::simulate_volume(c);
  const auto basis = default_basis(ph.metabolites.params());
  const auto maps = fit_volume(ph.metabolites, basis, {}, 0.01, 2);
  const auto &brain = ph.metabolites.brain_mask();
  EXPECT_EQ(maps.n_fitted, count(brain));
  EXPECT_EQ(maps.n_failed, 0U);
  const auto naa = basis.index_of("NAA");
  for (std::size_t v = 0; v < brain.size(); ++v) {
    if (brain[v] != 0) {
      EXPECT_GT(maps.amplitude[naa][v], 0.5);
      EXPECT_TRUE(std::isfinite(maps.crlb_percent[naa][v]));
    } else {
      EXPECT_TRUE(std::isnan(maps.amplitude[naa][v]));
    }
  }
}
