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

#include "wumrsi/eval/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::eval {

using spectral::SpectralVolume;

void BenchmarkConfig::validate() const
{
  phantom.validate();
  if (n_cases == 0) {
    throw InvalidArgument("benchmark: n_cases must be positive");
  }
  if (!full_axis && !(window_lo_ppm < window_hi_ppm)) {
    throw InvalidArgument("benchmark: window must satisfy lo < hi");
  }
}

BenchmarkConfig sideband_benchmark()
{
  BenchmarkConfig cfg;
  cfg.phantom.dims = {16, 16, 8};
  cfg.phantom.water_amp_factor = 1e3;
  cfg.phantom.sidebands = true;
  cfg.phantom.sideband_draw.min_frac = 0.002;
  cfg.phantom.sideband_draw.max_frac = 0.01;
  cfg.phantom.lipid_amplitude = 30.0;
  cfg.phantom.lipid_leak = 0.05;
  cfg.phantom.noise_sigma = 0.02;
  cfg.phantom.seed = 2024;
  return cfg;
}

std::vector<std::size_t> benchmark_cases(const Mask &brain, std::size_t n)
{
  std::vector<std::size_t> cases;
  for (std::size_t v = 0; v < brain.size() && cases.size() < n; ++v) {
    if (brain[v] != 0) {
      cases.push_back(v);
    }
  }
  return cases;
}

EvalReport evaluate_cleaned(const std::string &tag, const SpectralVolume &cleaned, const SpectralVolume &truth,
                            const std::vector<std::size_t> &cases, const BenchmarkConfig &cfg, const Mask *flagged)
{
  if (!(cleaned.dims() == truth.dims()) || !(cleaned.params() == truth.params())) {
    throw InvalidArgument("evaluate_cleaned: cleaned and truth volumes differ in grid or acquisition");
  }
  EvalReport r;
  r.benchmark_id = cfg.id;
  r.method_tag = tag;
  r.voxels = cases;
  std::ostringstream w;
  if (cfg.full_axis) {
    w << "full axis";
  } else {
    w << cfg.window_lo_ppm << "-" << cfg.window_hi_ppm << " ppm";
  }
  r.window = w.str();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t v : cases) {
    if (flagged != nullptr && (*flagged)[v] != 0) {
      r.nrmse_per_case.push_back(nan);
      r.failure.emplace_back("flagged by the pipeline");
      ++r.n_failed;
      continue;
    }
    try {
      const auto est = spectral::fid_to_spectrum(cleaned.fid(v));
      const auto ref = spectral::fid_to_spectrum(truth.fid(v));
      const double e = cfg.full_axis ? nrmse_full(est, ref) : nrmse(est, ref, cfg.window_lo_ppm, cfg.window_hi_ppm);
      r.nrmse_per_case.push_back(e);
      r.failure.emplace_back();
    } catch (const Error &ex) {
      r.nrmse_per_case.push_back(nan);
      r.failure.emplace_back(ex.what());
      ++r.n_failed;
    }
  }
  r.summary = summarize(r.nrmse_per_case);
  r.nrmse_mean = r.summary.mean;
  return r;
}

namespace {

SpectralVolume restrict_brain(const SpectralVolume &x, const std::vector<std::size_t> &cases)
{
  Mask brain(x.dims(), x.voxel_mm(), 0);
  for (std::size_t v : cases) {
    brain[v] = 1;
  }
  return SpectralVolume(x.dims(), x.voxel_mm(), x.params(), x.fids(), brain, x.skull_mask());
}

EvalReport failed_report(const std::string &tag, const std::vector<std::size_t> &cases, const BenchmarkConfig &cfg,
                         const std::string &message)
{
  EvalReport r;
  r.benchmark_id = cfg.id;
  r.method_tag = tag;
  r.voxels = cases;
  r.nrmse_per_case.assign(cases.size(), std::numeric_limits<double>::quiet_NaN());
  r.failure.assign(cases.size(), message);
  r.n_failed = cases.size();
  r.summary = summarize(r.nrmse_per_case);
  r.nrmse_mean = r.summary.mean;
  return r;
}

}  // namespace

std::vector<EvalReport> method_benchmark(const SpectralVolume &x, const SpectralVolume &truth,
                                         const std::vector<nuisance::NuisanceMethod> &methods,
                                         const std::vector<ExternalEstimate> &external, const BenchmarkConfig &cfg)
{
  cfg.validate();
  std::vector<EvalReport> reports;
  if (methods.empty() && external.empty()) {
    return reports;
  }
  const auto cases = benchmark_cases(x.brain_mask(), cfg.n_cases);
  if (cases.empty()) {
    throw InvalidArgument("method_benchmark: brain mask is empty");
  }
  const SpectralVolume sub = restrict_brain(x, cases);
  using clock = std::chrono::steady_clock;

  std::optional<nuisance::LipidOperator> op;
  double op_seconds = 0.0;
  std::string op_error;
  bool classical = false;
  for (auto m : methods) {
    classical = classical || m != nuisance::NuisanceMethod::external;
  }
  if (classical) {
    const auto t0 = clock::now();
    try {
      op = nuisance::skull_lipid_operator(x, cfg.pipeline);
    } catch (const Error &e) {
      op_error = e.what();
    }
    op_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  }

  for (auto m : methods) {
    const std::string tag = nuisance::to_string(m);
    if (m == nuisance::NuisanceMethod::external) {
      throw InvalidArgument("method_benchmark: external estimates are passed separately");
    }
    if (!op) {
      reports.push_back(failed_report(tag, cases, cfg, op_error));
      continue;
    }
    const auto t0 = clock::now();
    try {
      const auto res = nuisance::classical_pipeline(sub, m, cfg.pipeline, *op);
      reports.push_back(evaluate_cleaned(tag, res.metabolites, truth, cases, cfg, &res.flagged));
    } catch (const Error &e) {
      reports.push_back(failed_report(tag, cases, cfg, e.what()));
    }
    reports.back().seconds = op_seconds + std::chrono::duration<double>(clock::now() - t0).count();
  }
  for (const auto &ext : external) {
    const auto t0 = clock::now();
    try {
      const auto res = nuisance::subtract_volume(sub, ext.y, ext.energies ? &*ext.energies : nullptr);
      reports.push_back(evaluate_cleaned(ext.tag, res.metabolites, truth, cases, cfg, &res.flagged));
    } catch (const Error &e) {
      reports.push_back(failed_report(ext.tag, cases, cfg, e.what()));
    }
    reports.back().seconds = std::chrono::duration<double>(clock::now() - t0).count();
  }
  return reports;
}

std::vector<EvalReport> run_benchmark(const BenchmarkConfig &cfg, const std::vector<nuisance::NuisanceMethod> &methods)
{
  cfg.validate();
  const auto ph = phantom::simulate_volume(cfg.phantom, cfg.pipeline.threads);
  return method_benchmark(ph.total, ph.metabolites, methods, {}, cfg);
}

}  // namespace wumrsi::eval
