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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wumrsi/eval/benchmark.hpp"
#include "wumrsi/fit/fit.hpp"
#include "wumrsi/mwf/phantom.hpp"
#include "wumrsi/mwf/pipeline.hpp"
#include "wumrsi/nuisance/pipeline.hpp"
#include "wumrsi/phantom/dataset.hpp"
#include "wumrsi/phantom/volume_phantom.hpp"
#include "wumrsi/qsm/phantom.hpp"
#include "wumrsi/qsm/pipeline.hpp"

namespace wumrsi::cli {

/// Malformed or inconsistent configuration; the message names file and line.
class ConfigError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateSection {
  std::string kind = "mrsi";  // mrsi | qsm-sphere | mwf-two-pool
  bool components = true;     // write w/s/l/m next to x1
  phantom::VolumePhantomConfig mrsi = [] {
    phantom::VolumePhantomConfig c;
    c.dims = {32, 32, 32};
    return c;
  }();
  qsm::SpherePhantomConfig qsm_sphere;
  mwf::TwoPoolPhantomConfig two_pool;
};

struct RemoveNuisanceSection {
  std::string input;
  std::string method = "hlsvd-l2";
  std::string subtract_file;
  std::string truth;
  nuisance::PipelineConfig pipeline;
  double window_lo_ppm = eval::kMetaboliteWindowLo;
  double window_hi_ppm = eval::kMetaboliteWindowHi;
  bool full_axis = false;
};

struct FitSection {
  std::string input;
  bool glioma = true;        // include 2HG in the basis
  double noise_sigma = 0.0;  // complex noise std; 0 estimates it per voxel
  fit::FitConfig fit;
};

struct QsmSection {
  std::string input;
  std::string mask;          // empty: mask stored with the echoes, else all voxels
  std::size_t n_echoes = 56;  // echoes taken from a time-domain spectroscopic input
  qsm::QsmConfig qsm;
};

struct MwfSection {
  std::string input;
  std::size_t n_echoes = 56;  // echoes taken from a time-domain spectroscopic input
  mwf::MwfConfig mwf;
};

struct EvalSection {
  std::string mode = "compare";  // compare | benchmark
  std::string a;
  std::string b;
  std::string mask;
  std::string name = "compare";
  std::string difference = "absolute";
  eval::BenchmarkConfig benchmark = eval::sideband_benchmark();
  std::vector<std::string> methods{"hlsvd-l2", "modulus-l2"};
  std::vector<std::string> external;  // tag=path of subtract-file estimates
};

struct ExportSection {
  phantom::DatasetConfig dataset;
};

struct RunConfig {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out = "wumrsi_out";
  double max_flagged_ratio = 0.5;  // above this the run exits with code 3
  SimulateSection simulate;
  RemoveNuisanceSection remove_nuisance;
  FitSection fit;
  QsmSection qsm;
  MwfSection mwf;
  EvalSection eval;
  ExportSection export_dataset;
};

/// Defaults overlaid with the YAML document. Unknown keys and type errors
/// throw ConfigError with the line number.
[[nodiscard]] RunConfig parse_config(const std::string &text, const std::string &source = "<config>");
[[nodiscard]] RunConfig load_config(const std::filesystem::path &path);

/// Complete configuration, every key present.
[[nodiscard]] std::string dump_yaml(const RunConfig &cfg);
[[nodiscard]] std::string dump_json(const RunConfig &cfg);

}  // namespace wumrsi::cli
