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

#include "test_support.hpp"
#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"
#include "wumrsi/spectral/hankel.hpp"
#include "wumrsi/spectral/spectral_volume.hpp"
#include "wumrsi/spectral/wmk.hpp"

using namespace wumrsi;
using namespace wumrsi::spectral;
using wumrsi::test::damped;
using wumrsi::test::random_complex;

namespace {

double rel_err(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
{
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Direct O(n^2) DFT with the same shift and normalization, used as oracle.
Eigen::VectorXcd naive_spectrum(const Eigen::VectorXcd &x)
{
  const auto n = x.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = static_cast<double>(k) - static_cast<double>(n / 2);
    std::complex<double> acc = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      acc += x(t) * std::polar(1.0, -2.0 * M_PI * m * static_cast<double>(t) / static_cast<double>(n));
    }
    out(k) = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

}  // namespace

TEST(Acquisition, DefaultsAndAxis)
{
  const AcquisitionParams p;
  EXPECT_DOUBLE_EQ(p.bandwidth_hz, 2280.0);
  EXPECT_EQ(p.n_points, 451U);
  EXPECT_DOUBLE_EQ(p.te_ms, 0.9);
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(protocol_399().n_points, 399U);

  const auto ppm = make_ppm_axis(p);
  ASSERT_EQ(ppm.size(), 451);
  for (Eigen::Index k = 1; k < ppm.size(); ++k) {
    EXPECT_GT(ppm(k), ppm(k - 1));
  }
  EXPECT_NEAR(ppm(225), p.ref_ppm, 1e-12);
  // n bins of width bandwidth/n cover bandwidth/larmor ppm
  const double span = ppm(ppm.size() - 1) - ppm(0) + p.hz_per_bin() / p.larmor_mhz;
  EXPECT_NEAR(span, p.bandwidth_hz / p.larmor_mhz, 1e-9);
}

TEST(Acquisition, InvalidParamsRejected)
{
  AcquisitionParams p;
  p.n_points = 1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.bandwidth_hz = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Fourier, ImpulseGivesFlatMagnitude)
{
  const AcquisitionParams p;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(451);
  x(0) = 1.0;
  const auto s = fid_to_spectrum(Fid(x, p));
  const double expected = 1.0 / std::sqrt(451.0);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    EXPECT_NEAR(std::abs(s.bins()(k)), expected, 1e-12);
  }
}

TEST(Fourier, ExponentialPeaksAtExpectedPpm)
{
  const AcquisitionParams p;
  const auto x = damped(451, p.dwell_s(), 1.0, 100.0, 0.0);
  const auto s = fid_to_spectrum(Fid(x, p));
  Eigen::Index kmax = 0;
  s.bins().cwiseAbs().maxCoeff(&kmax);
  EXPECT_NEAR(s.ppm_axis()(kmax), 4.7 + 100.0 / 297.2, 0.5 * p.hz_per_bin() / p.larmor_mhz);
}

TEST(Fourier, MatchesDirectDft)
{
  AcquisitionParams p;
  for (std::size_t n : {64U, 97U, 451U}) {
    p.n_points = n;
    const auto x = random_complex(static_cast<Eigen::Index>(n), n);
    EXPECT_LT(rel_err(fid_to_spectrum(Fid(x, p)).bins(), naive_spectrum(x)), 1e-12) << n;
  }
}

TEST(Fourier, ParsevalAndRoundTripProperty)
{
  AcquisitionParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.n_points = 32 + 37 * seed;
    const auto x = random_complex(static_cast<Eigen::Index>(p.n_points), seed);
    const Fid fid(x, p);
    const auto s = fid_to_spectrum(fid);
    EXPECT_NEAR(s.bins().squaredNorm(), x.squaredNorm(), 1e-9 * x.squaredNorm());
    EXPECT_LT(rel_err(spectrum_to_fid(s).samples(), x), 1e-9);
  }
}

TEST(Fourier, ZeroSpectrumGivesZeroFid)
{
  const AcquisitionParams p;
  EXPECT_EQ(spectrum_to_fid(Spectrum::zeros(p)).samples().norm(), 0.0);
}

TEST(Fourier, ConjugateSymmetricSpectrumGivesRealFid)
{
  const AcquisitionParams p;
  const Eigen::Index n = 451;
  const Eigen::Index c = n / 2;
  auto bins = random_complex(n, 7);
  bins(c) = bins(c).real();
  for (Eigen::Index j = 1; j <= c; ++j) {
    bins(c + j) = std::conj(bins(c - j));
  }
  const auto fid = spectrum_to_fid(Spectrum(bins, p));
  EXPECT_LT(fid.samples().imag().cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Fourier, NonFiniteInputRejected)
{
  const AcquisitionParams p;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(451);
  x(3) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Fid(x, p), InvalidArgument);
}

TEST(Fourier, ThreeDimensionalRoundTrip)
{
  const Dims3 dims{6, 5, 4};
  const auto x = random_complex(static_cast<Eigen::Index>(dims.size()), 3);
  std::vector<std::complex<double>> data(x.data(), x.data() + x.size());
  fft::transform3(data, dims, fft::Direction::forward);
  fft::transform3(data, dims, fft::Direction::inverse);
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_NEAR(std::abs(data[i] / static_cast<double>(dims.size()) - x(static_cast<Eigen::Index>(i))), 0.0, 1e-12);
  }
}

TEST(Fourier, GoodSizeIsSmooth)
{
  EXPECT_EQ(fft::good_size(451), 480U);
  EXPECT_EQ(fft::good_size(512), 512U);
  EXPECT_EQ(fft::good_size(11), 12U);
}

TEST(Hankel, DefinitionOnFourSamples)
{
  AcquisitionParams p;
  p.n_points = 4;
  Eigen::VectorXcd x(4);
  x << 1.0, 2.0, 3.0, 4.0;
  const auto h = build_hankel(Fid(x, p), 2);
  ASSERT_EQ(h.rows(), 2);
  ASSERT_EQ(h.cols(), 3);
  Eigen::MatrixXcd expected(2, 3);
  expected << 1.0, 2.0, 3.0, 2.0, 3.0, 4.0;
  EXPECT_EQ(h, expected);
}

TEST(Hankel, RowsOutOfRangeRejected)
{
  const AcquisitionParams p;
  const auto fid = Fid::zeros(p);
  EXPECT_THROW((void)build_hankel(fid, 1), InvalidArgument);
  EXPECT_THROW((void)build_hankel(fid, 451), InvalidArgument);
  EXPECT_EQ(build_hankel(fid, 225).norm(), 0.0);
}

TEST(Hankel, RankOfDampedExponentialSumsProperty)
{
  AcquisitionParams p;
  p.n_points = 128;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 1; k <= 8; ++k) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(128);
    for (int j = 0; j < k; ++j) {
      const double f = -1000.0 + 2000.0 * (j + u(rng) * 0.5) / k;
      x += damped(128, p.dwell_s(), std::polar(0.5 + u(rng), 6.28 * u(rng)), f, 5.0 + 40.0 * u(rng));
    }
    const auto h = build_hankel(Fid(x, p), default_hankel_rows(128));
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
    const auto &s = svd.singularValues();
    EXPECT_LT(s(k) / s(k - 1), 1e-6) << "K = " << k;
  }
}

TEST(Hankel, OperatorMatchesDenseMatrix)
{
  const auto x = random_complex(451, 5);
  const Eigen::Index rows = 225;
  const auto h = build_hankel(std::span<const cplx>(x.data(), 451), rows);
  const HankelOperator op(std::span<const cplx>(x.data(), 451), rows);
  const auto v = random_complex(op.cols(), 6);
  const auto u = random_complex(op.rows(), 7);
  EXPECT_LT(rel_err(op.apply(v), h * v), 1e-12);
  EXPECT_LT(rel_err(op.apply_adjoint(u), h.adjoint() * u), 1e-12);
}

TEST(PpmBand, WaterBandBinCount)
{
  const AcquisitionParams p;
  const auto r = ppm_band_indices(p, 4.7, 0.5);
  const double expected = 2.0 * 0.5 * 297.2 / (2280.0 / 451.0);
  EXPECT_NEAR(static_cast<double>(r.size()), expected, 1.0);
  const auto ppm = make_ppm_axis(p);
  for (std::size_t k = r.begin; k < r.end; ++k) {
    EXPECT_LE(std::abs(ppm(static_cast<Eigen::Index>(k)) - 4.7), 0.5 + 1e-12);
  }
  EXPECT_GT(std::abs(ppm(static_cast<Eigen::Index>(r.begin) - 1) - 4.7), 0.5);
  EXPECT_GT(std::abs(ppm(static_cast<Eigen::Index>(r.end)) - 4.7), 0.5);
}

TEST(PpmBand, ZeroWidthAndOutsideAxis)
{
  const AcquisitionParams p;
  EXPECT_LE(ppm_band_indices(p, 3.03, 0.0).size(), 1U);
  EXPECT_THROW((void)ppm_band_indices(p, 40.0, 0.5), InvalidArgument);
  EXPECT_EQ(ppm_window(p, 40.0, 41.0).size(), 0U);
}

TEST(Wmk, SpectralVolumeRoundTrip)
{
  const test::TempDir tmp;
  const AcquisitionParams p;
  const Dims3 dims{3, 2, 2};
  const auto data = random_complex(static_cast<Eigen::Index>(451 * dims.size()), 9);
  Eigen::MatrixXcd fids = Eigen::Map<const Eigen::MatrixXcd>(data.data(), 451, 12);
  Mask brain(dims, {2.0, 2.0, 2.0}, 0);
  Mask skull(dims, {2.0, 2.0, 2.0}, 0);
  brain[4] = 1;
  skull[0] = 1;
  const SpectralVolume vol(dims, {2.0, 2.0, 2.0}, p, fids, brain, skull);
  const std::vector<double> energies(12, 2.5);
  write_spectral_volume(tmp / "v.wmk", vol, WmkDomain::time, &energies);
  const auto back = read_spectral_volume(tmp / "v.wmk");
  EXPECT_EQ(back.dims(), dims);
  EXPECT_EQ(back.params(), p);
  EXPECT_EQ(test::values_of(back.brain_mask()), brain.storage());
  EXPECT_EQ(test::values_of(back.skull_mask()), skull.storage());
  // float32 payload
  EXPECT_LT((back.fids() - fids).norm() / fids.norm(), 1e-6);
  const auto raw = read_wmk(tmp / "v.wmk");
  ASSERT_TRUE(raw.energies.has_value());
  EXPECT_EQ(*raw.energies, energies);

  write_spectral_volume(tmp / "f.wmk", vol, WmkDomain::frequency);
  EXPECT_LT((read_spectral_volume(tmp / "f.wmk").fids() - fids).norm() / fids.norm(), 1e-6);
}

TEST(Wmk, RealVolumeAndMaskRoundTrip)
{
  const test::TempDir tmp;
  Volume<double> v(Dims3{4, 3, 2}, {1.0, 1.5, 2.0}, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = 0.25 * static_cast<double>(i) - 1.0;
  }
  write_real_volume(tmp / "r.wmk", v, "chi_ppm");
  const auto r = read_real_volume(tmp / "r.wmk");
  EXPECT_EQ(r.dims(), v.dims());
  EXPECT_EQ(r.voxel_mm(), v.voxel_mm());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_FLOAT_EQ(static_cast<float>(r[i]), static_cast<float>(v[i]));
  }
  Mask m(v.dims(), v.voxel_mm(), 0);
  m[5] = 1;
  write_mask(tmp / "m.wmk", m, "brain");
  EXPECT_EQ(test::values_of(read_mask(tmp / "m.wmk")), m.storage());
}

TEST(Wmk, MissingDirectoryReportsPath)
{
  try {
    (void)read_wmk("/nonexistent/wumrsi_missing.wmk");
    FAIL() << "expected IoError";
  } catch (const IoError &e) {
    EXPECT_NE(std::string(e.what()).find("wumrsi_missing.wmk"), std::string::npos);
  }
}
