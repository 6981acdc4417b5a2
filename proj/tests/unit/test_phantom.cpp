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
#include "wumrsi/nuisance/lipid_operator.hpp"
#include "wumrsi/phantom/augment.hpp"
#include "wumrsi/phantom/dataset.hpp"
#include "wumrsi/phantom/simulate.hpp"
#include "wumrsi/phantom/training.hpp"
#include "wumrsi/phantom/volume_phantom.hpp"
#include "wumrsi/spectral/fourier.hpp"

using namespace wumrsi;
using namespace wumrsi::phantom;
using spectral::fid_to_spectrum;

namespace {

// Real part of the continuous-frequency transform of x (first point halved)
// on a fine grid around f0; returns the full width at half maximum.
double lorentzian_fwhm(const Eigen::VectorXcd &x, double dt, double f0)
{
  const double df = 0.005;
  std::vector<double> re;
  for (double f = f0 - 10.0; f <= f0 + 10.0; f += df) {
    std::complex<double> acc = 0.5 * x(0);
    for (Eigen::Index k = 1; k < x.size(); ++k) {
      acc += x(k) * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(k) * dt);
    }
    re.push_back(acc.real());
  }
  const auto peak = std::max_element(re.begin(), re.end());
  const double half = 0.5 * *peak;
  auto lo = peak;
  while (lo != re.begin() && *lo > half) {
    --lo;
  }
  auto hi = peak;
  while (hi + 1 != re.end() && *hi > half) {
    ++hi;
  }
  const auto cross = [&](auto a, auto b) {  // linear interpolation between samples a (below) and b (above)
    const double ia = static_cast<double>(a - re.begin());
    return ia + (half - *a) / (*b - *a) * (b > a ? 1.0 : -1.0);
  };
  return (cross(hi, hi - 1) - cross(lo, lo + 1)) * df;
}

nuisance::LipidOperator small_lipid_operator(const AcquisitionParams &p)
{
  Eigen::MatrixXcd basis(static_cast<Eigen::Index>(p.n_points), 8);
  for (Eigen::Index c = 0; c < 8; ++c) {
    Rng rng = substream(99, "test.lipid", static_cast<std::uint64_t>(c));
    basis.col(c) = fid_to_spectrum(Fid(synthesize(draw_lipids(10.0, 40.0, 100.0, rng), p), p)).bins();
  }
  return {basis, 1e-3};
}

}  // namespace

TEST(SimulateFid, WaterLineShapeAndPosition)
{
  AcquisitionParams p;
  p.n_points = 2048;
  PhantomSpec spec;
  spec.water_amp_factor = 1.0;  // no metabolites: absolute amplitude 1
  spec.water_damping_hz = 10.0;
  const auto sim = simulate_fid(spec, p);
  const auto s = fid_to_spectrum(sim.total);
  Eigen::Index k = 0;
  s.bins().cwiseAbs().maxCoeff(&k);
  EXPECT_NEAR(s.ppm_axis()(k), 4.7, p.hz_per_bin() / p.larmor_mhz);
  EXPECT_NEAR(lorentzian_fwhm(sim.total.samples(), p.dwell_s(), 0.0), 10.0 / std::numbers::pi, 0.02);
}

TEST(SimulateFid, WaterToMetaboliteRatioAtMaximumFactor)
{
  const AcquisitionParams p;
  PhantomSpec spec;
  spec.metabolites = {{"NAA", 2.01, 1.0, 10.0, 0.0}};
  spec.water_amp_factor = 1e4;
  spec.water_damping_hz = 20.0;
  const auto sim = simulate_fid(spec, p);
  // 16x zero-filled peaks approach the on-resonance sum a / (1 - exp(-d dt))
  AcquisitionParams zf = p;
  zf.n_points = 16 * p.n_points;
  const auto peak = [&](const Fid &f) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(zf.n_points));
    x.head(f.size()) = f.samples();
    return fid_to_spectrum(Fid(x, zf)).bins().cwiseAbs().maxCoeff();
  };
  const double ratio = peak(sim.water) / peak(sim.metabolites);
  const double dt = p.dwell_s();
  const auto dtft_peak = [&](double a, double d) {
    const double q = std::exp(-d * dt);
    return a * (1.0 - std::pow(q, static_cast<double>(p.n_points))) / (1.0 - q);
  };
  EXPECT_NEAR(ratio, dtft_peak(1e4, 20.0) / dtft_peak(1.0, 10.0), 0.02 * ratio);
  EXPECT_GE(ratio, 1e3);
  EXPECT_LE(ratio, 1e4);
  EXPECT_DOUBLE_EQ(spec.water_amplitude(), 1e4);
}

TEST(SimulateFid, EmptySpecGivesZero)
{
  const auto sim = simulate_fid(PhantomSpec{}, AcquisitionParams{});
  EXPECT_EQ(sim.total.samples().norm(), 0.0);
}

TEST(SimulateFid, ComponentAdditivityProperty)
{
  const AcquisitionParams p;
  TrainingDrawConfig draw;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng = substream(seed, "test.additivity");
    auto spec = draw_training_spec(draw, rng);
    spec.noise_sigma = 0.0;
    const auto sim = simulate_fid(spec, p);
    const Eigen::VectorXcd sum = sim.water.samples() + sim.sidebands.samples() + sim.lipids.samples() +
                                 sim.metabolites.samples();
    EXPECT_LE((sim.total.samples() - sum).norm(), 1e-9 * sim.total.samples().norm());
  }
}

TEST(SimulateFid, MirroredSidebandPeaksAreSymmetric)
{
  const AcquisitionParams p;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = substream(seed, "test.symmetry");
    SidebandComponent c;
    c.offset_hz = uniform(rng, 200.0, 900.0);
    c.amplitude_frac = 0.01;
    c.decay_hz = 30.0;
    c.phase_rad = uniform(rng, 0.0, 6.28);
    const auto s = fid_to_spectrum(
        Fid(synthesize_sidebands({c}, std::polar(100.0, uniform(rng, 0.0, 6.28)), 0.0, p), p));
    const auto centre = static_cast<Eigen::Index>(p.n_points / 2);
    const auto off = static_cast<Eigen::Index>(std::lround(c.offset_hz / p.hz_per_bin()));
    const double up = std::abs(s.bins()(centre + off));
    const double down = std::abs(s.bins()(centre - off));
    EXPECT_NEAR(up, down, 1e-6 * up);
  }
}

TEST(SimulateFid, PureFunctionOfSpecAndSeed)
{
  const AcquisitionParams p;
  Rng rng = substream(3, "test.pure");
  auto spec = draw_training_spec(TrainingDrawConfig{}, rng);
  spec.noise_sigma = 0.05;
  spec.seed = 77;
  const auto a = simulate_fid(spec, p);
  const auto b = simulate_fid(spec, p);
  EXPECT_EQ(a.total.samples(), b.total.samples());
  spec.seed = 78;
  EXPECT_NE(simulate_fid(spec, p).noise.samples(), a.noise.samples());
}

TEST(SimulateFid, NoiseVarianceMatchesSigma)
{
  Rng rng(1);
  const auto n = complex_noise(200000, 0.3, rng);
  EXPECT_NEAR(n.squaredNorm() / 200000.0, 0.09, 0.09 * 0.01);
}

TEST(MetabolitePanel, LiteratureShifts)
{
  const auto panel = default_metabolite_panel();
  EXPECT_GE(panel.size(), 6U);
  const auto has = [&](const std::string &name, double ppm) {
    return std::any_of(panel.begin(), panel.end(), [&](const Resonance &r) {
      return r.name == name && std::abs(r.shift_ppm - ppm) < 1e-9;
    });
  };
  EXPECT_TRUE(has("NAA", 2.01));
  EXPECT_TRUE(has("tCr", 3.03));
  EXPECT_TRUE(has("tCho", 3.21));
  EXPECT_TRUE(has("mI", 3.55));
  EXPECT_TRUE(has("Glu", 2.35));
  EXPECT_TRUE(has("2HG", 4.02));
  const auto again = default_metabolite_panel();
  ASSERT_EQ(again.size(), panel.size());
  for (std::size_t i = 0; i < panel.size(); ++i) {
    EXPECT_EQ(again[i].name, panel[i].name);
    EXPECT_EQ(again[i].amplitude, panel[i].amplitude);
  }
  const auto lipids = default_lipid_panel();
  ASSERT_EQ(lipids.size(), 3U);
}

TEST(Sidebands, AugmentationBoundsProperty)
{
  SidebandDrawConfig draw;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng = substream(seed, "test.augment");
    const auto in = draw_sidebands(draw, rng);
    std::vector<bool> mirrored;
    const auto out = augment_sidebands(in, rng, {}, &mirrored);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      EXPECT_GT(out[i].amplitude_frac, 0.0);
      EXPECT_LE(out[i].amplitude_frac, 0.01);
      EXPECT_GE(out[i].phase_rad, 0.0);
      EXPECT_LT(out[i].phase_rad, 2.0 * std::numbers::pi);
      const double moved = mirrored[i] ? std::abs(out[i].offset_hz + in[i].offset_hz)
                                       : std::abs(out[i].offset_hz - in[i].offset_hz);
      EXPECT_LE(moved, 60.0);
    }
  }
}

TEST(Sidebands, AugmentationIsReproducible)
{
  Rng r0 = substream(5, "s");
  const auto in = draw_sidebands({}, r0);
  Rng a = substream(5, "a");
  Rng b = substream(5, "a");
  const auto x = augment_sidebands(in, a);
  const auto y = augment_sidebands(in, b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].offset_hz, y[i].offset_hz);
    EXPECT_EQ(x[i].amplitude_frac, y[i].amplitude_frac);
  }
  EXPECT_THROW((void)augment_sidebands({}, a), InvalidArgument);
}

TEST(PairAugmentation, IdentityCommonFactorAndScaleRange)
{
  const AcquisitionParams p;
  const spectral::Spectrum x1(test::random_complex(451, 1), p);
  const spectral::Spectrum y(test::random_complex(451, 2), p);
  const auto [x1i, yi] = apply_pair_augmentation(x1, y, {0.0, 1.0});
  EXPECT_EQ(x1i.bins(), x1.bins());
  EXPECT_EQ(yi.bins(), y.bins());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = substream(seed, "test.pair");
    const auto aug = draw_pair_augmentation(rng);
    EXPECT_GE(aug.scale, 0.5);
    EXPECT_LE(aug.scale, 1.5);
    const auto [xa, ya] = apply_pair_augmentation(x1, y, aug);
    for (Eigen::Index k = 0; k < 451; k += 37) {
      const auto before = x1.bins()(k) / y.bins()(k);
      const auto after = xa.bins()(k) / ya.bins()(k);
      EXPECT_NEAR(std::abs(after - before), 0.0, 1e-12 * std::abs(before));
    }
  }
  AcquisitionParams q;
  q.n_points = 64;
  EXPECT_THROW((void)apply_pair_augmentation(x1, spectral::Spectrum::zeros(q), {}), InvalidArgument);
}

TEST(TrainingPair, IdentitiesProperty)
{
  const AcquisitionParams p;
  const auto op = small_lipid_operator(p);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = substream(seed, "test.pair.spec");
    auto spec = draw_training_spec(TrainingDrawConfig{}, rng);
    spec.seed = seed;
    const auto pair = make_training_pair(spec, op, p);
    const double e = pair.energy;
    // normalization: ||x1 - x2|| = 1 after division
    EXPECT_NEAR((pair.x1.bins() - pair.x2.bins()).norm(), 1.0, 1e-9);
    // x2 = (I - L) x1
    const Eigen::VectorXcd x2 = op.project(pair.x1.bins());
    EXPECT_LE((x2 - pair.x2.bins()).norm(), 1e-9 * x2.norm());
    // m = x1 - y, denormalized, against the simulated metabolites plus noise
    const auto sim = simulate_fid(spec, p);
    const Eigen::VectorXcd m =
        fid_to_spectrum(Fid(sim.metabolites.samples() + sim.noise.samples(), p)).bins();
    EXPECT_LE(((pair.x1.bins() - pair.y_truth.bins()) * e - m).norm(), 1e-6 * std::max(1.0, m.norm()));
    EXPECT_LE((pair.m_truth.bins() * e - m).norm(), 1e-6 * std::max(1.0, m.norm()));
  }
}

TEST(TrainingPair, LipidFreePhantomStillValid)
{
  const AcquisitionParams p;
  const auto op = small_lipid_operator(p);
  PhantomSpec spec;
  spec.metabolites = default_metabolite_panel();
  spec.water_amp_factor = 100.0;
  const auto pair = make_training_pair(spec, op, p);
  // oracle: the energy is the norm of L x1 on this instance
  const Eigen::VectorXcd x1 = fid_to_spectrum(simulate_fid(spec, p).total).bins();
  EXPECT_NEAR(pair.energy, op.suppress(x1).norm(), 1e-9 * pair.energy);
  EXPECT_GT(pair.energy, 1e-12);
}

TEST(TrainingPair, ZeroSignalIsDegenerate)
{
  const AcquisitionParams p;
  EXPECT_THROW((void)make_training_pair(PhantomSpec{}, small_lipid_operator(p), p), DegenerateEnergy);
}

TEST(Dataset, DeterministicAndConsistent)
{
  const test::TempDir tmp;
  DatasetConfig cfg;
  cfg.n_pairs = 10;
  cfg.seed = 12;
  const auto m1 = export_dataset(cfg, tmp / "a");
  cfg.threads = 3;
  const auto m2 = export_dataset(cfg, tmp / "b");
  EXPECT_EQ(test::read_bytes(tmp / "a" / "pairs.bin"), test::read_bytes(tmp / "b" / "pairs.bin"));
  EXPECT_EQ(test::read_bytes(tmp / "a" / "manifest.json"), test::read_bytes(tmp / "b" / "manifest.json"));
  EXPECT_EQ(m1.count, 10U);

  const auto manifest = read_manifest(tmp / "a");
  EXPECT_EQ(manifest.count, 10U);
  EXPECT_EQ(manifest.seed, 12U);
  const auto records = read_records(tmp / "a", manifest);
  ASSERT_EQ(records.size(), 10U);
  EXPECT_EQ(std::filesystem::file_size(tmp / "a" / "pairs.bin"), 10U * 3U * 451U * 8U);

  // reload and check y + m = x1 after denormalization
  const auto op = dataset_lipid_operator(cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto pair = generate_record(cfg, op, i);
    const double e = manifest.energies[i];
    EXPECT_DOUBLE_EQ(e, pair.energy);
    const Eigen::VectorXcd lhs = (records[i].y + pair.m_truth.bins()) * e;
    const Eigen::VectorXcd rhs = records[i].x1 * e;
    EXPECT_LE((lhs - rhs).norm(), 1e-6 * rhs.norm());
  }
}

TEST(Dataset, UnwritableDirectoryReportsPath)
{
  DatasetConfig cfg;
  cfg.n_pairs = 1;
  try {
    (void)export_dataset(cfg, "/proc/wumrsi_no_such_dir/x");
    FAIL() << "expected IoError";
  } catch (const IoError &e) {
    EXPECT_NE(std::string(e.what()).find("wumrsi_no_such_dir"), std::string::npos);
  }
}

TEST(VolumePhantom, MasksComponentsAndThreadIndependence)
{
  VolumePhantomConfig cfg;
  cfg.dims = {10, 10, 6};
  cfg.noise_sigma = 0.01;
  cfg.seed = 4;
  const auto a = simulate_volume(cfg, 1);
  const auto b = simulate_volume(cfg, 3);
  EXPECT_EQ(a.total.fids(), b.total.fids());
  const auto &brain = a.total.brain_mask();
  const auto &skull = a.total.skull_mask();
  EXPECT_GT(count(brain), 0U);
  EXPECT_GT(count(skull), 0U);
  for (std::size_t v = 0; v < brain.size(); ++v) {
    EXPECT_FALSE(brain[v] != 0 && skull[v] != 0);
    if (brain[v] == 0) {
      EXPECT_EQ(a.metabolites.fids().col(static_cast<Eigen::Index>(v)).norm(), 0.0);
    }
  }
  // noise is confined to the head
  const Eigen::MatrixXcd noise =
      a.total.fids() - a.water.fids() - a.sidebands.fids() - a.lipids.fids() - a.metabolites.fids();
  double power = 0.0;
  std::size_t head = 0;
  for (std::size_t v = 0; v < brain.size(); ++v) {
    const double pv = noise.col(static_cast<Eigen::Index>(v)).squaredNorm();
    if (brain[v] != 0 || skull[v] != 0) {
      power += pv;
      ++head;
    } else {
      EXPECT_EQ(pv, 0.0);
    }
  }
  EXPECT_NEAR(std::sqrt(power / static_cast<double>(head * 451U)), 0.01, 0.0005);
}

TEST(VolumePhantom, EmptyGridRejected)
{
  VolumePhantomConfig cfg;
  cfg.dims = {0, 16, 8};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}
