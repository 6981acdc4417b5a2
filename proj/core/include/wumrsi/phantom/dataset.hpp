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
#include <vector>

#include "wumrsi/phantom/training.hpp"

namespace wumrsi::phantom {

/// Dataset directory layout:
///   manifest.json  count, seed, acquisition and generator parameters,
///                  per-record energies
///   pairs.bin      per record x1, x2, y (n_points complex each), float32
///                  little-endian, interleaved real/imag, normalized by E
struct DatasetConfig {
  std::size_t n_pairs = 10;
  std::uint64_t seed = 0;
  AcquisitionParams acquisition{};
  TrainingDrawConfig draw{};
  std::size_t lipid_basis_size = 64;
  double diag_target = nuisance::kDefaultDiagTarget;
  unsigned threads = 1;
};

/// Lipid operator shared by all records: a synthetic skull basis with beta
/// tuned to the mean-diagonal target.
[[nodiscard]] nuisance::LipidOperator dataset_lipid_operator(const DatasetConfig &cfg);

/// Record `index` of the dataset, resampled deterministically when its
/// energy degenerates.
[[nodiscard]] TrainingPair generate_record(const DatasetConfig &cfg, const nuisance::LipidOperator &op,
                                           std::size_t index);

struct DatasetManifest {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  AcquisitionParams acquisition{};
  double beta = 0.0;
  std::vector<double> energies;
};

DatasetManifest export_dataset(const DatasetConfig &cfg, const std::filesystem::path &out_dir);

struct DatasetRecord {
  Eigen::VectorXcd x1;
  Eigen::VectorXcd x2;
  Eigen::VectorXcd y;
};

[[nodiscard]] DatasetManifest read_manifest(const std::filesystem::path &dir);
[[nodiscard]] std::vector<DatasetRecord> read_records(const std::filesystem::path &dir,
                                                      const DatasetManifest &manifest);

}  // namespace wumrsi::phantom
