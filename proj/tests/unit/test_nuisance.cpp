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

#include <chrono>
#include <cmath>

#include "test_support.hpp"
#include "wumrsi/common/error.hpp"
#include "wumrsi/common/rng.hpp"
#include "wumrsi/eval/metrics.hpp"
#include "wumrsi/nuisance/pipeline.hpp"
#include "wumrsi/phantom/dataset.hpp"
#include "wumrsi/phantom/simulate.hpp"
#include "wumrsi/phantom/training.hpp"
#include "wumrsi/phantom/volume_phantom.hpp"
#include "wumrsi/spectral/fourier.hpp"

using namespace wumrsi;
using namespace wumrsi::nuisance;
using spectral::AcquisitionParams;
using spectral::fid_to_spectrum;
using test::damped;

namespace {

Eigen::MatrixXcd random_basis(Eigen::Index n, Eigen::Index cols, std::uint64_t seed)
{
  Eigen::MatrixXcd b(n, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    b.col(c) = test::random_complex(n, seed * 1000 + static_cast<std::uint64_t>(c));
  }
  return b;
}

// Synthetic skull spectra: random lipid lines, one spectrum per column.
Eigen::MatrixXcd lipid_basis(const AcquisitionParams &p, Eigen::Index cols, std::uint64_t seed)
{
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(p.n_points), cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    Rng rng = substream(seed, "test.lipids", static_cast<std::uint64_t>(c));
    const auto lines = phantom::draw_lipids(30.0, 40.0, 100.0, rng);
    b.col(c) = fid_to_spectrum(spectral::Fid(phantom::synthesize(lines, p), p)).bins();
  }
  return b;
}

double energy_ratio(const Eigen::VectorXcd &out, const Eigen::VectorXcd &in)
{
  return out.squaredNorm() / in.squaredNorm();
}

}  // namespace

// ------------------------------------------------------------------ HLSVD

TEST(Hlsvd, SingleWaterLineRemovedExactly)
{
  const AcquisitionParams p;
  const spectral::Fid fid(damped(451, p.dwell_s(), 1e3, 0.0, 15.0), p);
  const auto r = hlsvd_remove_water(fid);
  EXPECT_FALSE(r.flagged);
  EXPECT_LT(energy_ratio(r.clean.samples(), fid.samples()), 1e-6);
  EXPECT_LT((r.water.samples() + r.clean.samples() - fid.samples()).norm(), 1e-9 * fid.samples().norm());
}

TEST(Hlsvd, InBandSumsRemovedProperty)
{
  const AcquisitionParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = substream(seed, "test.hlsvd");
    const int k = 1 + static_cast<int>(seed % 8);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(451);
    for (int j = 0; j < k; ++j) {
      // in-band: within 4.7 +- 0.45 ppm
      const double f = uniform(rng, -0.45, 0.45) * p.larmor_mhz;
      x += damped(451, p.dwell_s(), std::polar(uniform(rng, 1.0, 1e3), uniform(rng, 0.0, 6.28)), f,
                  uniform(rng, 5.0, 50.0));
    }
    const auto r = hlsvd_remove_water(spectral::Fid(x, p));
    EXPECT_LT(energy_ratio(r.clean.samples(), x), 1e-6) << "seed " << seed << ", " << k << " modes";
  }
}

TEST(Hlsvd, MetabolitePeakPreservedNextToWater)
{
  const AcquisitionParams p;
  phantom::PhantomSpec spec;
  spec.metabolites = {{"NAA", 2.01, 1.0, 10.0, 0.0}};
  spec.water_amp_factor = 1e3;
  const auto sim = phantom::simulate_fid(spec, p);
  const auto r = hlsvd_remove_water(sim.total);
  const auto clean = fid_to_spectrum(r.clean);
  const auto truth = fid_to_spectrum(sim.metabolites);
  const auto k = spectral::ppm_band_indices(p, 2.01, 0.0).begin;
  const double got = std::abs(clean.bins()(static_cast<Eigen::Index>(k)));
  const double want = std::abs(truth.bins()(static_cast<Eigen::Index>(k)));
  EXPECT_NEAR(got, want, 0.02 * want);
}

TEST(Hlsvd, OutOfBandModeLeftAlone)
{
  const AcquisitionParams p;
  const double f = p.offset_hz(2.01);
  const spectral::Fid fid(damped(451, p.dwell_s(), 1.0, f, 10.0), p);
  const auto r = hlsvd_remove_water(fid);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.water.samples().norm(), 0.0);
  EXPECT_EQ(r.clean.samples(), fid.samples());
}

TEST(Hlsvd, DecompositionRecoversModeParameters)
{
  const AcquisitionParams p;
  const Eigen::VectorXcd x = damped(451, p.dwell_s(), std::polar(2.0, 0.3), 120.0, 12.0) +
                             damped(451, p.dwell_s(), std::polar(0.5, -1.0), -300.0, 30.0);
  auto modes = hlsvd_decompose(x, p.dwell_s(), 2);
  ASSERT_EQ(modes.size(), 2U);
  std::sort(modes.begin(), modes.end(), [](const Mode &a, const Mode &b) { return a.freq_hz > b.freq_hz; });
  EXPECT_NEAR(modes[0].freq_hz, 120.0, 1e-6);
  EXPECT_NEAR(modes[0].damping_hz, 12.0, 1e-6);
  EXPECT_NEAR(std::abs(modes[0].amplitude - std::polar(2.0, 0.3)), 0.0, 1e-6);
  EXPECT_NEAR(modes[1].freq_hz, -300.0, 1e-6);
  EXPECT_NEAR(modes[1].damping_hz, 30.0, 1e-6);
  EXPECT_LT((synthesize_modes(modes, 451, p.dwell_s()) - x).norm(), 1e-8 * x.norm());
}

TEST(Hlsvd, BothSelectionOrdersRemoveWater)
{
  const AcquisitionParams p;
  const Eigen::VectorXcd x = damped(451, p.dwell_s(), 1e3, 3.0, 15.0) + damped(451, p.dwell_s(), 1.0, -800.0, 10.0);
  for (auto sel : {ModeSelection::rank_then_band, ModeSelection::band_then_rank}) {
    HlsvdConfig cfg;
    cfg.selection = sel;
    const auto r = hlsvd_remove_water(spectral::Fid(x, p), cfg);
    const Eigen::VectorXcd naa = damped(451, p.dwell_s(), 1.0, -800.0, 10.0);
    EXPECT_LT((r.clean.samples() - naa).norm(), 1e-6 * naa.norm());
  }
}

TEST(Hlsvd, InvalidConfigRejected)
{
  HlsvdConfig cfg;
  cfg.rank = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  AcquisitionParams p;
  p.n_points = 40;  // n must exceed 2 rank
  EXPECT_THROW((void)hlsvd_remove_water(spectral::Fid::zeros(p)), InvalidArgument);
}

// ------------------------------------------------------------------ lipid operator

TEST(LipidOperator, IdentityAtZeroBetaAndHermitian)
{
  const auto b = random_basis(64, 4, 1);
  const LipidOperator op0(b, 0.0);
  EXPECT_LT((op0.dense() - Eigen::MatrixXcd::Identity(64, 64)).norm(), 1e-12);
  const auto x = test::random_complex(64, 2);
  EXPECT_LT((op0.project(x)).norm(), 1e-12);

  const LipidOperator op(b, 0.37);
  const auto d = op.dense();
  EXPECT_LT((d - d.adjoint()).norm(), 1e-8 * d.norm());
  // oracle: direct inverse
  const Eigen::MatrixXcd direct =
      (Eigen::MatrixXcd::Identity(64, 64) + 0.37 * b * b.adjoint()).inverse();
  EXPECT_LT((d - direct).norm(), 1e-8 * direct.norm());
  EXPECT_LT((op.diagonal() - direct.diagonal().real()).norm(), 1e-8);
}

TEST(LipidOperator, SpanSuppressedOrthogonalComplementKept)
{
  const auto b = random_basis(64, 4, 3);
  const Eigen::VectorXcd in_span = b * test::random_complex(4, 4);
  Eigen::VectorXcd off = test::random_complex(64, 5);
  off -= b * b.colPivHouseholderQr().solve(off);
  double prev = 1.0;
  for (double beta : {1e-2, 1.0, 1e2, 1e4, 1e6}) {
    const LipidOperator op(b, beta);
    const double r = op.suppress(in_span).norm() / in_span.norm();
    EXPECT_LT(r, prev);
    prev = r;
    EXPECT_LT((op.suppress(off) - off).norm(), 1e-8 * off.norm());
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(LipidOperator, SpectralBoundComplementarityLinearityProperty)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = substream(seed, "test.op");
    const auto cols = static_cast<Eigen::Index>(1 + seed % 9);
    const LipidOperator op(random_basis(48, cols, seed), std::pow(10.0, uniform(rng, -3.0, 3.0)));
    const auto ev = op.eigenvalues();
    EXPECT_GT(ev.minCoeff(), 0.0);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
    const auto x = test::random_complex(48, seed + 100);
    const auto z = test::random_complex(48, seed + 200);
    EXPECT_LE(op.suppress(x).norm(), x.norm() * (1.0 + 1e-12));
    EXPECT_LT((op.suppress(x) + op.project(x) - x).norm(), 1e-8 * x.norm());
    const std::complex<double> a(0.3, -1.2);
    const std::complex<double> c(-2.0, 0.5);
    EXPECT_LT((op.suppress(a * x + c * z) - a * op.suppress(x) - c * op.suppress(z)).norm(), 1e-8 * x.norm());
  }
}

TEST(LipidOperator, AxisMismatchAndEmptyBasisRejected)
{
  const LipidOperator op(random_basis(64, 2, 1), 1.0);
  const AcquisitionParams p;
  EXPECT_THROW((void)apply_lipid_suppression(spectral::Spectrum::zeros(p), op), InvalidArgument);
  EXPECT_THROW((void)apply_lipid_projection(spectral::Spectrum::zeros(p), op), InvalidArgument);
  EXPECT_THROW(LipidOperator(Eigen::MatrixXcd(64, 0), 1.0), InvalidArgument);
  EXPECT_THROW(LipidOperator(random_basis(64, 2, 1), -1.0), InvalidArgument);
}

TEST(Autotune, ReachesTargetOnEightColumnBases)
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    AcquisitionParams p;
    p.n_points = 64;
    const auto b = lipid_basis(p, 8, seed);
    const auto res = autotune_beta(factorize_lipid_basis(b));
    EXPECT_NEAR(LipidOperator(b, res.beta).mean_abs_diag(), 0.938, 1e-3);
    EXPECT_NEAR(res.mean_abs_diag, 0.938, 1e-3);
  }
}

TEST(Autotune, DoublingBasisQuartersBeta)
{
  AcquisitionParams p;
  p.n_points = 64;
  const auto b = lipid_basis(p, 8, 2);
  const double beta1 = autotune_beta(b);
  const double beta2 = autotune_beta(Eigen::MatrixXcd(2.0 * b));
  EXPECT_NEAR(beta2 / beta1, 0.25, 0.25 * 1e-3);
  EXPECT_NEAR(LipidOperator(2.0 * b, beta2).mean_abs_diag(), 0.938, 1e-3);
}

TEST(Autotune, RankBoundReportedWhenUnreachable)
{
  // mean|diag| >= 1 - rank / n, so 8 columns cannot reach 0.938 at n = 451
  const AcquisitionParams p;
  const auto b = lipid_basis(p, 8, 1);
  try {
    (void)autotune_beta(factorize_lipid_basis(b));
    FAIL() << "expected TargetUnreachable";
  } catch (const TargetUnreachable &e) {
    EXPECT_GE(e.achievable_low(), 1.0 - 8.0 / 451.0 - 1e-9);
    EXPECT_LE(e.achievable_high(), 1.0);
  }
  EXPECT_THROW((void)autotune_beta(Eigen::MatrixXcd::Zero(64, 8).eval()), Error);
}

TEST(LipidOperator, LipidSpectraSuppressedAtTunedBeta)
{
  const AcquisitionParams p;
  phantom::DatasetConfig dc;
  const auto op = phantom::dataset_lipid_operator(dc);
  EXPECT_NEAR(op.mean_abs_diag(), 0.938, 1e-3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = substream(seed, "test.lipid.only");
    const auto lines = phantom::draw_lipids(20.0, 40.0, 100.0, rng);
    const spectral::Spectrum x = fid_to_spectrum(spectral::Fid(phantom::synthesize(lines, p), p));
    const auto sup = apply_lipid_suppression(x, op);
    const auto proj = apply_lipid_projection(x, op);
    EXPECT_LE(energy_ratio(sup.bins(), x.bins()), 0.1) << seed;
    EXPECT_GE(energy_ratio(proj.bins(), x.bins()), 0.8) << seed;
  }
}

// ------------------------------------------------------------------ modulus and subtraction

TEST(Modulus, RealPositiveUnchangedPhaseInvariantNonNegative)
{
  const AcquisitionParams p;
  Eigen::VectorXcd pos = damped(451, p.dwell_s(), 1.0, 0.0, 20.0);
  const auto m = modulus_method(spectral::Fid(pos, p));
  EXPECT_LT((m.samples() - pos).norm(), 1e-15);
  const auto x = test::random_complex(451, 8);
  const auto m0 = modulus_method(spectral::Fid(x, p));
  for (double theta : {0.4, 2.0, -3.0}) {
    const auto mt = modulus_method(spectral::Fid(x * std::polar(1.0, theta), p));
    EXPECT_LT((mt.samples() - m0.samples()).norm(), 1e-12);
  }
  EXPECT_EQ(m0.samples().imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(m0.samples().real().minCoeff(), 0.0);
}

TEST(Modulus, SingleSidebandBeatRetained)
{
  // An unpaired sideband modulates the amplitude of |s(t)|; the beat survives
  // the magnitude and sits outside the water band, so HLSVD cannot remove it.
  const AcquisitionParams p;
  phantom::PhantomSpec spec;
  spec.water_amp_factor = 1e3;
  spec.sidebands = {{400.0, 0.01, 40.0, 0.5, false}};
  const auto sim = phantom::simulate_fid(spec, p);
  const auto h = hlsvd_remove_water(modulus_method(sim.total));
  const double beat = energy_ratio(h.clean.samples(), sim.sidebands.samples());
  // first order: |w + s| = |w| + Re(s conj(w)) / |w|, half the sideband energy
  EXPECT_NEAR(beat, 0.5, 0.1);
}

TEST(Subtract, Identities)
{
  const AcquisitionParams p;
  const spectral::Spectrum x1(test::random_complex(451, 1), p);
  EXPECT_EQ(subtract_nuisance(x1, {x1}).bins().norm(), 0.0);
  EXPECT_EQ(subtract_nuisance(x1, {spectral::Spectrum::zeros(p)}).bins(), x1.bins());
  AcquisitionParams q;
  q.n_points = 64;
  EXPECT_THROW((void)subtract_nuisance(x1, {spectral::Spectrum::zeros(q)}), InvalidArgument);

  phantom::DatasetConfig dc;
  const auto op = phantom::dataset_lipid_operator(dc);
  const auto pair = phantom::generate_record(dc, op, 3);
  const auto m = subtract_nuisance(pair.x1, {pair.y_truth});
  EXPECT_LT((m.bins() - pair.m_truth.bins()).norm(), 1e-6 * std::max(1.0, pair.m_truth.bins().norm()));
}

TEST(Subtract, MethodSpellings)
{
  EXPECT_EQ(parse_method("hlsvd-l2"), NuisanceMethod::hlsvd_l2);
  EXPECT_EQ(parse_method("modulus_l2"), NuisanceMethod::modulus_l2);
  EXPECT_EQ(parse_method("subtract-file"), NuisanceMethod::external);
  EXPECT_THROW((void)parse_method("wavelet"), InvalidArgument);
  EXPECT_STREQ(to_string(NuisanceMethod::hlsvd_l2), "hlsvd_l2");
}

// ------------------------------------------------------------------ volume pipeline

namespace {

phantom::VolumePhantom clean_phantom(std::uint64_t seed)
{
  phantom::VolumePhantomConfig c;
  c.dims = {10, 10, 6};
  c.seed = seed;
  c.sidebands = false;
  c.lipid_amplitude = 0.0;
  return phantom::simulate_volume(c);
}

}  // namespace

TEST(ClassicalPipeline, WaterOnlyVolumeCleared)
{
  const auto ph = clean_phantom(1);
  const auto r = classical_pipeline(ph.water, NuisanceMethod::hlsvd_l2);
  EXPECT_TRUE(r.failures.empty());
  double in = 0.0;
  double out = 0.0;
  for (std::size_t v = 0; v < ph.water.n_voxels(); ++v) {
    if (ph.water.brain_mask()[v] != 0) {
      in += ph.water.fids().col(static_cast<Eigen::Index>(v)).squaredNorm();
      out += r.metabolites.fids().col(static_cast<Eigen::Index>(v)).squaredNorm();
    }
  }
  EXPECT_LT(out / in, 1e-4);
}

TEST(ClassicalPipeline, MetaboliteOnlyVolumePassesThrough)
{
  const auto ph = clean_phantom(2);
  const auto r = classical_pipeline(ph.metabolites, NuisanceMethod::hlsvd_l2);
  EXPECT_EQ(r.beta, 0.0);  // skull without lipid signal: no suppression
  double worst = 0.0;
  for (std::size_t v = 0; v < ph.metabolites.n_voxels(); ++v) {
    if (ph.metabolites.brain_mask()[v] != 0) {
      worst = std::max(worst, eval::nrmse_full(fid_to_spectrum(r.metabolites.fid(v)),
                                               fid_to_spectrum(ph.metabolites.fid(v))));
    }
  }
  EXPECT_LT(worst, 2.0);
}

TEST(ClassicalPipeline, EmptyBrainMaskGivesEmptyOutput)
{
  const auto ph = clean_phantom(3);
  const spectral::SpectralVolume vol(ph.total.dims(), ph.total.voxel_mm(), ph.total.params(), ph.total.fids(),
                                     Mask(ph.total.dims(), ph.total.voxel_mm(), 0), ph.total.skull_mask());
  const auto r = classical_pipeline(vol, NuisanceMethod::modulus_l2);
  EXPECT_EQ(r.processed, 0U);
  EXPECT_EQ(r.metabolites.fids().norm(), 0.0);
}

TEST(ClassicalPipeline, EmptySkullIsLipidStageError)
{
  const auto ph = clean_phantom(3);
  const spectral::SpectralVolume vol(ph.total.dims(), ph.total.voxel_mm(), ph.total.params(), ph.total.fids(),
                                     ph.total.brain_mask(), Mask(ph.total.dims(), ph.total.voxel_mm(), 0));
  try {
    (void)classical_pipeline(vol, NuisanceMethod::hlsvd_l2);
    FAIL() << "expected StageError";
  } catch (const StageError &e) {
    EXPECT_EQ(e.stage(), "lipid");
  }
}

TEST(ClassicalPipeline, FailedVoxelsZeroedAndFlagged)
{
  const auto ph = clean_phantom(4);
  Eigen::MatrixXcd fids = ph.total.fids();
  // a brain voxel too short for the Hankel rank cannot be decomposed; emulate
  // with a huge rank instead
  PipelineConfig cfg;
  cfg.beta = 0.0;
  cfg.hlsvd.rank = 300;
  const auto r = classical_pipeline(ph.total.with_fids(fids), NuisanceMethod::hlsvd_l2, cfg,
                                    LipidOperator(random_basis(451, 2, 1), 0.0));
  EXPECT_EQ(r.failures.size(), count(ph.total.brain_mask()));
  EXPECT_EQ(count(r.flagged), count(ph.total.brain_mask()));
  EXPECT_EQ(r.metabolites.fids().norm(), 0.0);
  const auto c = ph.total.brain_mask().coords(r.failures.front().voxel);
  EXPECT_EQ(c, r.failures.front().coords);
}

TEST(SubtractVolume, TruthNuisanceRecoversMetabolites)
{
  phantom::VolumePhantomConfig c;
  c.dims = {8, 8, 4};
  c.noise_sigma = 0.01;
  const auto ph = phantom::simulate_volume(c);
  const Eigen::MatrixXcd m_noisy = ph.total.fids() - ph.water.fids() - ph.sidebands.fids() - ph.lipids.fids();
  const auto y = ph.total.with_fids(ph.water.fids() + ph.sidebands.fids() + ph.lipids.fids());
  const auto r = subtract_volume(ph.total, y);
  for (std::size_t v = 0; v < ph.total.n_voxels(); ++v) {
    const auto col = static_cast<Eigen::Index>(v);
    if (ph.total.brain_mask()[v] != 0) {
      EXPECT_LT((r.metabolites.fids().col(col) - m_noisy.col(col)).norm(), 1e-9 * m_noisy.col(col).norm());
    }
  }
  // normalized estimate with energies
  std::vector<double> e(ph.total.n_voxels(), 4.0);
  const auto r2 = subtract_volume(ph.total, y.with_fids(y.fids() / 4.0), &e);
  EXPECT_LT((r2.metabolites.fids() - r.metabolites.fids()).norm(), 1e-9 * r.metabolites.fids().norm());
  e.pop_back();
  EXPECT_THROW((void)subtract_volume(ph.total, y, &e), InvalidArgument);
}
