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


#include <benchmark/benchmark.h>

#include "wumrsi/common/rng.hpp"
#include "wumrsi/fit/basis.hpp"
#include "wumrsi/fit/fit.hpp"
#include "wumrsi/nuisance/hlsvd.hpp"
#include "wumrsi/nuisance/lipid_operator.hpp"
#include "wumrsi/phantom/simulate.hpp"
#include "wumrsi/phantom/training.hpp"
#include "wumrsi/spectral/fourier.hpp"

using namespace wumrsi;
using spectral::AcquisitionParams;

namespace {

spectral::Fid water_fid(const AcquisitionParams &p)
{
  phantom::PhantomSpec spec;
  spec.metabolites = phantom::default_metabolite_panel();
  spec.water_amp_factor = 1e3;
  spec.noise_sigma = 0.02;
  spec.seed = 11;
  return phantom::simulate_fid(spec, p).total;
}

void BM_FidToSpectrum(benchmark::State &state)
{
  AcquisitionParams p;
  p.n_points = static_cast<std::size_t>(state.range(0));
  const auto x = water_fid(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::fid_to_spectrum(x));
  }
}
BENCHMARK(BM_FidToSpectrum)->Arg(451)->Arg(512)->Arg(2048);

void BM_HlsvdRemoveWater(benchmark::State &state)
{
  const AcquisitionParams p;
  const auto x = water_fid(p);
  nuisance::HlsvdConfig cfg;
  cfg.rank = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nuisance::hlsvd_remove_water(x, cfg));
  }
}
BENCHMARK(BM_HlsvdRemoveWater)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LipidSuppress(benchmark::State &state)
{
  const AcquisitionParams p;
  const auto r = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXcd basis(static_cast<Eigen::Index>(p.n_points), r);
  for (Eigen::Index c = 0; c < r; ++c) {
    Rng rng = substream(3, "bench.lipids", static_cast<std::uint64_t>(c));
    const auto lines = phantom::draw_lipids(30.0, 40.0, 100.0, rng);
    basis.col(c) = spectral::fid_to_spectrum(spectral::Fid(phantom::synthesize(lines, p), p)).bins();
  }
  const nuisance::LipidOperator op(basis, 1e-3);
  const Eigen::VectorXcd x = spectral::fid_to_spectrum(water_fid(p)).bins();
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.suppress(x));
  }
}
BENCHMARK(BM_LipidSuppress)->Arg(64)->Arg(256);

void BM_FitSpectrum(benchmark::State &state)
{
  const AcquisitionParams p;
  const auto basis = fit::make_basis(phantom::default_metabolite_panel(), p);
  phantom::PhantomSpec spec;
  spec.metabolites = phantom::default_metabolite_panel();
  spec.noise_sigma = 0.05;
  spec.seed = 5;
  const auto x = spectral::fid_to_spectrum(phantom::simulate_fid(spec, p).total);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit::fit_spectrum(x, basis));
  }
}
BENCHMARK(BM_FitSpectrum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
