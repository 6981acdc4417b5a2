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

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wumrsi/common/volume.hpp"
#include "wumrsi/spectral/acquisition.hpp"
#include "wumrsi/spectral/spectral_volume.hpp"

namespace wumrsi::spectral {

/// WMK container: a directory holding header.json and data.bin.
///
/// data.bin is little-endian float32, voxel-major then sample (x fastest over
/// voxels); complex64 samples are interleaved real/imag. Optional masks are
/// stored as one uint8 per voxel in separate files named by the header, and
/// an optional float64 energies file carries per-voxel normalization.
enum class WmkDtype { complex64, float32 };
enum class WmkDomain { time, frequency, echo, image };

struct WmkHeader {
  Dims3 dims{};
  VoxelSize voxel_mm{1.0, 1.0, 1.0};
  std::size_t n_samples = 1;
  AcquisitionParams acquisition{};
  WmkDtype dtype = WmkDtype::float32;
  WmkDomain domain = WmkDomain::image;
  std::vector<double> te_list_ms;
  std::string quantity;
};

struct WmkData {
  WmkHeader header;
  std::vector<std::complex<double>> complex_samples;  // complex64 payload
  std::vector<double> real_samples;                   // float32 payload
  std::optional<Mask> brain_mask;
  std::optional<Mask> skull_mask;
  std::optional<std::vector<double>> energies;
};

void write_wmk(const std::filesystem::path &dir, const WmkData &data);
[[nodiscard]] WmkData read_wmk(const std::filesystem::path &dir);

[[nodiscard]] const char *to_string(WmkDomain domain) noexcept;
[[nodiscard]] const char *to_string(WmkDtype dtype) noexcept;

/// Spectral volumes: time-domain FIDs on disk by default; frequency-domain
/// files are converted back to FIDs on read.
void write_spectral_volume(const std::filesystem::path &dir, const SpectralVolume &vol,
                           WmkDomain domain = WmkDomain::time,
                           const std::vector<double> *energies = nullptr);
[[nodiscard]] SpectralVolume read_spectral_volume(const std::filesystem::path &dir);

/// Scalar image (n_samples = 1, float32).
void write_real_volume(const std::filesystem::path &dir, const Volume<double> &vol, const std::string &quantity,
                       const Mask *mask = nullptr);
[[nodiscard]] Volume<double> read_real_volume(const std::filesystem::path &dir);

void write_mask(const std::filesystem::path &dir, const Mask &mask, const std::string &quantity);
[[nodiscard]] Mask read_mask(const std::filesystem::path &dir);

}  // namespace wumrsi::spectral
