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
#include <complex>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "wumrsi/common/error.hpp"
#include "wumrsi/mwf/biexp.hpp"
#include "wumrsi/mwf/decay_volume.hpp"
#include "wumrsi/mwf/phantom.hpp"
#include "wumrsi/mwf/pipeline.hpp"
#include "wumrsi/mwf/rpca.hpp"
#include "wumrsi/mwf/tukey.hpp"
#include "wumrsi/qsm/phantom.hpp"

using namespace wumrsi;
using namespace wumrsi::mwf;

namespace {

std::vector<double> two_pool(const std::vector<double> &te, double af, double tf, double as, double ts)
{
  std::vector<double> s;
  for (double t : te) {
    s.push_back(af * std::exp(-t / tf) + as * std::exp(-t / ts));
  }
  return s;
}

DecayVolume rank_two_volume(const Dims3 &d, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  DecayVolume v;
  v.te_ms = qsm::default_echo_times();
  v.mask = Mask(d, {1, 1, 1}, 1);
  v.magnitude.assign(v.te_ms.size(), Volume<double>(d));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto s = two_pool(v.te_ms, 0.3 * u(rng), 10.0, u(rng), 60.0);
    for (std::size_t e = 0; e < s.size(); ++e) {
      v.magnitude[e][i] = s[e];
    }
  }
  return v;
}

double nrmse(const DecayVolume &a, const DecayVolume &b)
{
  double num = 0.0;
  double den = 0.0;
  for (std::size_t e = 0; e < a.n_echoes(); ++e) {
    for (std::size_t i = 0; i < a.mask.size(); ++i) {
      const double d = a.magnitude[e][i] - b.magnitude[e][i];
      num += d * d;
      den += b.magnitude[e][i] * b.magnitude[e][i];
    }
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(Tukey, TaperShape)
{
  EXPECT_EQ(tukey_taper(0.0, 0.4), 1.0);
  EXPECT_EQ(tukey_taper(0.6, 0.4), 1.0);
  EXPECT_NEAR(tukey_taper(0.8, 0.4), 0.5, 1e-12);
  EXPECT_NEAR(tukey_taper(1.0, 0.4), 0.0, 1e-12);
  EXPECT_EQ(tukey_taper(1.0, 0.0), 1.0);
}

TEST(Tukey, IdentityAndDcCases)
{
  const Dims3 d{8, 6, 4};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Volume<double> img(d);
  for (auto &v : img.storage()) {
    v = u(rng);
  }
  const auto same = tukey_filter(img, 0.0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_NEAR(same[i], img[i], 1e-12);
  }
  const Volume<double> flat(d, {1, 1, 1}, 2.5);
  const auto dc = tukey_filter(flat, 0.4);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    EXPECT_NEAR(dc[i], 2.5, 1e-12);
  }
  double e_in = 0.0;
  double e_out = 0.0;
  const auto f = tukey_filter(img, 0.4);
  for (std::size_t i = 0; i < img.size(); ++i) {
    e_in += img[i] * img[i];
    e_out += f[i] * f[i];
  }
  EXPECT_LE(e_out, e_in);
}

TEST(Tukey, GibbsRippleReduced)
{
  // Box edge between grid points, reconstructed from its truncated Fourier
  // series along x. The ringing tail is measured on the plateau from four
  // voxels inside the edges.
  const std::size_t n = 64;
  const double lo = 10.3;
  const double hi = 40.3;
  const Dims3 d{n, 4, 4};
  Volume<double> img(d);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double x = static_cast<double>(img.coords(i)[0]);
    std::complex<double> s = (hi - lo) / static_cast<double>(n);
    for (int k = -31; k <= 31; ++k) {
      if (k == 0) {
        continue;
      }
      const double w = 2.0 * std::numbers::pi * k / static_cast<double>(n);
      const std::complex<double> ck = (std::exp(std::complex<double>(0.0, -w * lo)) -
                                       std::exp(std::complex<double>(0.0, -w * hi))) /
                                      std::complex<double>(0.0, w * static_cast<double>(n));
      s += ck * std::exp(std::complex<double>(0.0, w * x));
    }
    img[i] = s.real();
  }
  const auto ripple = [&](const Volume<double> &v) {
    double r = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double xd = static_cast<double>(x);
      if (xd > lo + 4.0 && xd < hi - 4.0) {
        r = std::max(r, std::abs(v(x, 1, 2) - 1.0));
      }
    }
    return r;
  };
  const double before = ripple(img);
  ASSERT_GT(before, 0.01);
  EXPECT_LE(ripple(tukey_filter(img, 0.4)), 0.5 * before);
}

TEST(CropEchoes, Examples)
{
  DecayVolume v;
  v.mask = Mask(Dims3{2, 1, 1}, {1, 1, 1}, 1);
  for (std::size_t e = 0; e < 120; ++e) {
    v.te_ms.push_back(0.9 + static_cast<double>(e) * 1000.0 / 2280.0);
    v.magnitude.emplace_back(v.mask.dims(), VoxelSize{1, 1, 1}, std::exp(-v.te_ms.back() / 30.0));
  }
  EXPECT_EQ(crop_echoes(v, 25.0).n_echoes(), 56U);
  const auto all = crop_echoes(v, 1e3);
  EXPECT_EQ(all.n_echoes(), 120U);
  EXPECT_EQ(all.te_ms, v.te_ms);
  EXPECT_THROW((void)crop_echoes(v, 0.5), InvalidArgument);
  EXPECT_THROW((void)crop_echoes(v, 1.5), InvalidArgument);  // fewer than 4 echoes
}

TEST(Rpca, RankTwoVolumeRecovered)
{
  const auto v = rank_two_volume({12, 12, 6}, 3);
  const auto r = rpca_denoise(v);
  EXPECT_LT(nrmse(r.denoised, v), 0.01);
  EXPECT_FALSE(r.patches.empty());
}

TEST(Rpca, NoiseEnergyRejected)
{
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(1000, 56);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = g(rng);
  }
  const auto r = rpca_decompose(m);
  EXPECT_LE(r.low_rank.squaredNorm(), 0.5 * m.squaredNorm());
  if (r.converged) {
    EXPECT_LT(r.primal_residual, 0.01);
    EXPECT_LT(r.dual_residual, 0.01);
  }
}

TEST(Rpca, ZeroInputAndConfig)
{
  const auto z = rpca_decompose(Eigen::MatrixXd::Zero(50, 10));
  EXPECT_EQ(z.low_rank.norm(), 0.0);
  EXPECT_EQ(z.sparse.norm(), 0.0);
  RpcaConfig c;
  c.rho = 2.5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  EXPECT_EQ(patch_origins(20, 10), (std::vector<std::size_t>{0, 5, 10}));
  EXPECT_EQ(patch_origins(4, 10), (std::vector<std::size_t>{0}));
}

TEST(Biexp, Examples)
{
  const auto te = qsm::default_echo_times();
  const auto single = biexp_fit(two_pool(te, 0.0, 10.0, 1.0, 60.0), te);
  EXPECT_LT(single.mwf(), 0.02);
  const auto s = two_pool(te, 0.15, 10.0, 0.85, 60.0);
  const auto f = biexp_fit(s, te);
  EXPECT_NEAR(f.mwf(), 0.15, 0.01);
  EXPECT_NEAR(f.t2s_fast_ms, 10.0, 0.1);
  EXPECT_NEAR(f.t2s_slow_ms, 60.0, 0.5);
  std::vector<double> s3;
  for (double v : s) {
    s3.push_back(3.0 * v);
  }
  const auto f3 = biexp_fit(s3, te);
  EXPECT_NEAR(f3.mwf(), f.mwf(), 1e-12);
  EXPECT_NEAR(f3.t2s_fast_ms, f.t2s_fast_ms, 1e-9);
  EXPECT_NEAR(f3.amp_fast, 3.0 * f.amp_fast, 1e-9);
}

TEST(Biexp, ZeroAndInvalidInput)
{
  const auto te = qsm::default_echo_times();
  const auto z = biexp_fit(std::vector<double>(te.size(), 0.0), te);
  EXPECT_EQ(z.amp_fast, 0.0);
  EXPECT_EQ(z.amp_slow, 0.0);
  EXPECT_TRUE(std::isnan(z.t2s_fast_ms));
  EXPECT_TRUE(std::isnan(z.mwf()));
  const std::vector<double> three{1, 2, 3};
  EXPECT_THROW((void)biexp_fit(three, three), InvalidArgument);
  auto neg = two_pool(te, 0.1, 10.0, 0.9, 60.0);
  neg[3] = -0.1;
  EXPECT_THROW((void)biexp_fit(neg, te), InvalidArgument);
}

TEST(Biexp, NestedModelProperty)
{
  const auto te = qsm::default_echo_times();
  const BiexpFitter fitter(te);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = two_pool(te, u(rng), 3.0 + 22.0 * u(rng), u(rng), 25.0 + 125.0 * u(rng));
    for (auto &v : s) {
      v = std::abs(v + g(rng));
    }
    const auto two = fitter.fit(s);
    const auto one = fitter.fit_single(s);
    EXPECT_LE(two.residual_norm, one.residual_norm * (1.0 + 1e-12));
    if (std::isfinite(two.mwf())) {
      EXPECT_GE(two.mwf(), 0.0);
      EXPECT_LE(two.mwf(), 1.0);
    }
  }
}

TEST(MwfPipeline, PhantomMeanAndInvariants)
{
  const auto vol = make_two_pool_phantom();
  MwfConfig c;
  c.threads = 2;
  const auto r = mwf_pipeline(vol, c);
  EXPECT_NEAR(masked_mean(r.map.mwf, vol.mask), 0.15, 0.02);
  EXPECT_EQ(r.stages, (std::vector<std::string>{"rpca", "biexp"}));
  for (std::size_t i = 0; i < vol.mask.size(); ++i) {
    if (vol.mask[i] == 0) {
      EXPECT_TRUE(std::isnan(r.map.mwf[i]));
    } else if (std::isfinite(r.map.mwf[i])) {
      EXPECT_GE(r.map.mwf[i], 0.0);
      EXPECT_LE(r.map.mwf[i], 1.0);
      if (r.map.amp_fast[i] > 0.0 && r.map.amp_slow[i] > 0.0) {
        EXPECT_LT(r.map.t2s_fast_ms[i], r.map.t2s_slow_ms[i]);
      }
    }
  }
}

TEST(MwfPipeline, ScaleInvariance)
{
  TwoPoolPhantomConfig pc;
  pc.dims = {12, 12, 6};
  const auto vol = make_two_pool_phantom(pc);
  const auto scaled = [&](double k) {
    auto out = vol;
    for (auto &m : out.magnitude) {
      for (auto &v : m.storage()) {
        v *= k;
      }
    }
    return out;
  };
  const auto a = mwf_pipeline(vol);
  // A power of two scales every intermediate exactly.
  const auto b = mwf_pipeline(scaled(8.0));
  const auto c = mwf_pipeline(scaled(7.0));
  for (std::size_t i = 0; i < vol.mask.size(); ++i) {
    if (std::isfinite(a.map.mwf[i])) {
      EXPECT_EQ(b.map.mwf[i], a.map.mwf[i]);
      EXPECT_NEAR(c.map.mwf[i], a.map.mwf[i], 1e-6);
    } else {
      EXPECT_TRUE(std::isnan(b.map.mwf[i]));
    }
  }
}

TEST(MwfPipeline, DenoiserNearTransparentOnCleanData)
{
  TwoPoolPhantomConfig pc;
  pc.dims = {12, 12, 6};
  pc.snr = 0.0;
  const auto vol = make_two_pool_phantom(pc);
  MwfConfig with;
  MwfConfig without;
  without.rpca = false;
  const double a = masked_mean(mwf_pipeline(vol, with).map.mwf, vol.mask);
  const double b = masked_mean(mwf_pipeline(vol, without).map.mwf, vol.mask);
  EXPECT_LT(std::abs(a - b), 0.01);
  EXPECT_NEAR(b, 0.15, 1e-3);
}

TEST(MwfPipeline, EmptyMaskAndGreWindow)
{
  TwoPoolPhantomConfig pc;
  pc.dims = {8, 8, 4};
  auto vol = make_two_pool_phantom(pc);
  vol.mask = Mask(vol.mask.dims(), vol.mask.voxel_mm());
  const auto r = mwf_pipeline(vol);
  for (double v : r.map.mwf.values()) {
    EXPECT_TRUE(std::isnan(v));
  }
  MwfConfig gre;
  gre.input = InputKind::gre;
  gre.rpca = false;
  EXPECT_EQ(mwf_pipeline(make_two_pool_phantom(pc), gre).stages.front(), "tukey");
  EXPECT_EQ(parse_input_kind("gre"), InputKind::gre);
  EXPECT_THROW((void)parse_input_kind("dwi"), InvalidArgument);
}
