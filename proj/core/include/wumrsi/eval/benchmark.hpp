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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wumrsi/eval/metrics.hpp"
#include "wumrsi/nuisance/pipeline.hpp"
#include "wumrsi/phantom/volume_phantom.hpp"

namespace wumrsi::eval {

struct BenchmarkConfig {
  std::string id = "sideband";
  phantom::VolumePhantomConfig phantom;
  std::size_t n_cases = 200;  // brain voxels evaluated, in raster order
  double window_lo_ppm = kMetaboliteWindowLo;
  double window_hi_ppm = kMetaboliteWindowHi;
  bool full_axis = false;
  nuisance::PipelineConfig pipeline;

  void validate() const;
};

/// Water 1e3 x the metabolite total, sidebands of at most 1 % of water, skull
/// lipids with a small leak into the brain.
[[nodiscard]] BenchmarkConfig sideband_benchmark();

/// Externally predicted nuisance (e.g. a network), consumed by subtraction.
struct ExternalEstimate {
  std::string tag;
  spectral::SpectralVolume y;
  std::optional<std::vector<double>> energies;
};

struct EvalReport {
  std::string benchmark_id;
  std::string method_tag;
  std::vector<std::size_t> voxels;
  std::vector<double> nrmse_per_case;  // percent; NaN where the case failed
  std::vector<std::string> failure;    // empty string for successful cases
  std::size_t n_failed = 0;
  Summary summary;                     // over successful cases
  double nrmse_mean = 0.0;             // = summary.mean
  double seconds = 0.0;
  std::string window;                  // description of the compared bins
};

/// The first n brain voxels in raster order.
[[nodiscard]] std::vector<std::size_t> benchmark_cases(const Mask &brain, std::size_t n);

/// Per-case NRMSE of cleaned against truth spectra. Voxels set in `flagged`
/// count as failures.
[[nodiscard]] EvalReport evaluate_cleaned(const std::string &tag, const spectral::SpectralVolume &cleaned,
                                          const spectral::SpectralVolume &truth,
                                          const std::vector<std::size_t> &cases, const BenchmarkConfig &cfg,
                                          const Mask *flagged = nullptr);

/// Runs each classical method (one shared skull lipid operator) and each
/// external estimate on the benchmark cases of x.
[[nodiscard]] std::vector<EvalReport> method_benchmark(const spectral::SpectralVolume &x,
                                                       const spectral::SpectralVolume &truth,
                                                       const std::vector<nuisance::NuisanceMethod> &methods,
                                                       const std::vector<ExternalEstimate> &external,
                                                       const BenchmarkConfig &cfg);

/// Simulates the benchmark phantom and runs method_benchmark on it.
[[nodiscard]] std::vector<EvalReport> run_benchmark(const BenchmarkConfig &cfg,
                                                    const std::vector<nuisance::NuisanceMethod> &methods);

}  // namespace wumrsi::eval
