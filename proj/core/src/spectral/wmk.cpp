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

#include "wumrsi/spectral/wmk.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::spectral {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char *kFormat = "WMK";
constexpr int kVersion = 1;
constexpr const char *kBrainFile = "brain_mask.bin";
constexpr const char *kSkullFile = "skull_mask.bin";
constexpr const char *kEnergyFile = "energies.bin";

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T v)
{
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void write_binary(const fs::path &path, const std::vector<T> &values)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  std::vector<T> le(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    le[i] = to_little(values[i]);
  }
  out.write(reinterpret_cast<const char *>(le.data()), static_cast<std::streamsize>(le.size() * sizeof(T)));
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

template <typename T>
std::vector<T> read_binary(const fs::path &path, std::size_t count)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open: " + path.string());
  }
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != count * sizeof(T)) {
    throw IoError(path.string() + ": expected " + std::to_string(count * sizeof(T)) + " bytes, found " +
                  std::to_string(bytes));
  }
  in.seekg(0);
  std::vector<T> values(count);
  in.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(bytes));
  for (auto &v : values) {
    v = to_little(v);
  }
  return values;
}

WmkDomain parse_domain(const std::string &s, const fs::path &where)
{
  if (s == "time") return WmkDomain::time;
  if (s == "frequency") return WmkDomain::frequency;
  if (s == "echo") return WmkDomain::echo;
  if (s == "image") return WmkDomain::image;
  throw IoError(where.string() + ": unknown domain '" + s + "'");
}

WmkDtype parse_dtype(const std::string &s, const fs::path &where)
{
  if (s == "complex64") return WmkDtype::complex64;
  if (s == "float32") return WmkDtype::float32;
  throw IoError(where.string() + ": unknown dtype '" + s + "'");
}

void write_mask_file(const fs::path &path, const Mask &mask)
{
  std::vector<std::uint8_t> bytes(mask.values().begin(), mask.values().end());
  write_binary(path, bytes);
}

Mask read_mask_file(const fs::path &path, const Dims3 &dims, const VoxelSize &voxel)
{
  auto bytes = read_binary<std::uint8_t>(path, dims.size());
  for (auto &b : bytes) {
    b = b != 0 ? 1 : 0;
  }
  return {dims, voxel, std::move(bytes)};
}

}  // namespace

const char *to_string(WmkDomain domain) noexcept
{
  switch (domain) {
    case WmkDomain::time: return "time";
    case WmkDomain::frequency: return "frequency";
    case WmkDomain::echo: return "echo";
    case WmkDomain::image: return "image";
  }
  return "image";
}

const char *to_string(WmkDtype dtype) noexcept
{
  return dtype == WmkDtype::complex64 ? "complex64" : "float32";
}

void write_wmk(const fs::path &dir, const WmkData &data)
{
  const auto &h = data.header;
  const std::size_t count = h.dims.size() * h.n_samples;
  if (h.n_samples == 0) {
    throw InvalidArgument("wmk: n_samples must be positive");
  }
  if (h.dtype == WmkDtype::complex64 && data.complex_samples.size() != count) {
    throw InvalidArgument("wmk: complex payload size does not match header");
  }
  if (h.dtype == WmkDtype::float32 && data.real_samples.size() != count) {
    throw InvalidArgument("wmk: real payload size does not match header");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }

  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["dims"] = {h.dims.nx, h.dims.ny, h.dims.nz};
  j["voxel_mm"] = {h.voxel_mm[0], h.voxel_mm[1], h.voxel_mm[2]};
  j["n_samples"] = h.n_samples;
  j["bandwidth_hz"] = h.acquisition.bandwidth_hz;
  j["te_ms"] = h.acquisition.te_ms;
  j["larmor_mhz"] = h.acquisition.larmor_mhz;
  j["ref_ppm"] = h.acquisition.ref_ppm;
  j["field_tesla"] = h.acquisition.field_tesla;
  j["dtype"] = to_string(h.dtype);
  j["domain"] = to_string(h.domain);
  j["axis_order"] = "x,y,z,sample";
  j["endianness"] = "little";
  if (!h.te_list_ms.empty()) {
    j["te_list_ms"] = h.te_list_ms;
  }
  if (!h.quantity.empty()) {
    j["quantity"] = h.quantity;
  }
  json masks = json::object();
  if (data.brain_mask) {
    require_same_grid(*data.brain_mask, Mask(h.dims), "wmk brain mask");
    write_mask_file(dir / kBrainFile, *data.brain_mask);
    masks["brain"] = kBrainFile;
  }
  if (data.skull_mask) {
    require_same_grid(*data.skull_mask, Mask(h.dims), "wmk skull mask");
    write_mask_file(dir / kSkullFile, *data.skull_mask);
    masks["skull"] = kSkullFile;
  }
  if (!masks.empty()) {
    j["masks"] = masks;
  }
  if (data.energies) {
    if (data.energies->size() != h.dims.size()) {
      throw InvalidArgument("wmk: energies must have one value per voxel");
    }
    write_binary(dir / kEnergyFile, *data.energies);
    j["energy_file"] = kEnergyFile;
  }

  std::vector<float> payload;
  if (h.dtype == WmkDtype::complex64) {
    payload.resize(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
      payload[2 * i] = static_cast<float>(data.complex_samples[i].real());
      payload[2 * i + 1] = static_cast<float>(data.complex_samples[i].imag());
    }
  } else {
    payload.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      payload[i] = static_cast<float>(data.real_samples[i]);
    }
  }
  write_binary(dir / "data.bin", payload);

  const fs::path header_path = dir / "header.json";
  std::ofstream out(header_path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + header_path.string());
  }
  out << j.dump(2) << '\n';
}

WmkData read_wmk(const fs::path &dir)
{
  const fs::path header_path = dir / "header.json";
  std::ifstream in(header_path);
  if (!in) {
    throw IoError("cannot open WMK header: " + header_path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw IoError(header_path.string() + ": " + e.what());
  }

  WmkData data;
  auto &h = data.header;
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw IoError(header_path.string() + ": not a WMK header");
    }
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    const auto voxel = j.at("voxel_mm").get<std::vector<double>>();
    if (dims.size() != 3 || voxel.size() != 3) {
      throw IoError(header_path.string() + ": dims and voxel_mm need three entries");
    }
    h.dims = {dims[0], dims[1], dims[2]};
    h.voxel_mm = {voxel[0], voxel[1], voxel[2]};
    h.n_samples = j.at("n_samples").get<std::size_t>();
    h.acquisition.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    h.acquisition.te_ms = j.at("te_ms").get<double>();
    h.acquisition.larmor_mhz = j.at("larmor_mhz").get<double>();
    h.acquisition.ref_ppm = j.at("ref_ppm").get<double>();
    h.acquisition.field_tesla = j.value("field_tesla", 7.0);
    h.acquisition.n_points = h.n_samples;
    h.dtype = parse_dtype(j.at("dtype").get<std::string>(), header_path);
    h.domain = parse_domain(j.value("domain", std::string("image")), header_path);
    if (j.contains("te_list_ms")) {
      h.te_list_ms = j.at("te_list_ms").get<std::vector<double>>();
    }
    h.quantity = j.value("quantity", std::string());
    if (j.contains("masks")) {
      const auto &m = j.at("masks");
      if (m.contains("brain")) {
        data.brain_mask = read_mask_file(dir / m.at("brain").get<std::string>(), h.dims, h.voxel_mm);
      }
      if (m.contains("skull")) {
        data.skull_mask = read_mask_file(dir / m.at("skull").get<std::string>(), h.dims, h.voxel_mm);
      }
    }
    if (j.contains("energy_file")) {
      data.energies = read_binary<double>(dir / j.at("energy_file").get<std::string>(), h.dims.size());
    }
  } catch (const json::exception &e) {
    throw IoError(header_path.string() + ": " + e.what());
  }

  const std::size_t count = h.dims.size() * h.n_samples;
  if (h.dtype == WmkDtype::complex64) {
    const auto raw = read_binary<float>(dir / "data.bin", 2 * count);
    data.complex_samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      data.complex_samples[i] = {raw[2 * i], raw[2 * i + 1]};
    }
  } else {
    const auto raw = read_binary<float>(dir / "data.bin", count);
    data.real_samples.assign(raw.begin(), raw.end());
  }
  return data;
}

void write_spectral_volume(const fs::path &dir, const SpectralVolume &vol, WmkDomain domain,
                           const std::vector<double> *energies)
{
  if (domain != WmkDomain::time && domain != WmkDomain::frequency) {
    throw InvalidArgument("spectral volume: domain must be time or frequency");
  }
  WmkData data;
  data.header.dims = vol.dims();
  data.header.voxel_mm = vol.voxel_mm();
  data.header.n_samples = vol.params().n_points;
  data.header.acquisition = vol.params();
  data.header.dtype = WmkDtype::complex64;
  data.header.domain = domain;
  data.header.quantity = "mrsi";
  const auto n = static_cast<Eigen::Index>(vol.params().n_points);
  data.complex_samples.resize(vol.n_voxels() * vol.params().n_points);
  for (std::size_t v = 0; v < vol.n_voxels(); ++v) {
    Eigen::VectorXcd col = vol.fids().col(static_cast<Eigen::Index>(v));
    if (domain == WmkDomain::frequency) {
      col = fid_to_spectrum(Fid(col, vol.params())).bins();
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      data.complex_samples[v * vol.params().n_points + static_cast<std::size_t>(k)] = col(k);
    }
  }
  data.brain_mask = vol.brain_mask();
  data.skull_mask = vol.skull_mask();
  if (energies != nullptr) {
    data.energies = *energies;
  }
  write_wmk(dir, data);
}

SpectralVolume read_spectral_volume(const fs::path &dir)
{
  WmkData data = read_wmk(dir);
  const auto &h = data.header;
  if (h.dtype != WmkDtype::complex64) {
    throw IoError(dir.string() + ": spectral volume must be complex64");
  }
  if (h.domain != WmkDomain::time && h.domain != WmkDomain::frequency) {
    throw IoError(dir.string() + ": spectral volume must be in time or frequency domain");
  }
  const auto n = static_cast<Eigen::Index>(h.n_samples);
  Eigen::MatrixXcd fids(n, static_cast<Eigen::Index>(h.dims.size()));
  for (std::size_t v = 0; v < h.dims.size(); ++v) {
    Eigen::VectorXcd col(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      col(k) = data.complex_samples[v * h.n_samples + static_cast<std::size_t>(k)];
    }
    if (h.domain == WmkDomain::frequency) {
      col = spectrum_to_fid(Spectrum(col, h.acquisition)).samples();
    }
    fids.col(static_cast<Eigen::Index>(v)) = col;
  }
  Mask brain = data.brain_mask ? *data.brain_mask : Mask(h.dims, h.voxel_mm);
  Mask skull = data.skull_mask ? *data.skull_mask : Mask(h.dims, h.voxel_mm);
  return {h.dims, h.voxel_mm, h.acquisition, std::move(fids), std::move(brain), std::move(skull)};
}

void write_real_volume(const fs::path &dir, const Volume<double> &vol, const std::string &quantity, const Mask *mask)
{
  WmkData data;
  data.header.dims = vol.dims();
  data.header.voxel_mm = vol.voxel_mm();
  data.header.n_samples = 1;
  data.header.dtype = WmkDtype::float32;
  data.header.domain = WmkDomain::image;
  data.header.quantity = quantity;
  data.real_samples.assign(vol.values().begin(), vol.values().end());
  if (mask != nullptr) {
    data.brain_mask = *mask;
  }
  write_wmk(dir, data);
}

Volume<double> read_real_volume(const fs::path &dir)
{
  WmkData data = read_wmk(dir);
  if (data.header.dtype != WmkDtype::float32 || data.header.n_samples != 1) {
    throw IoError(dir.string() + ": expected a scalar float32 volume");
  }
  return {data.header.dims, data.header.voxel_mm, std::move(data.real_samples)};
}

void write_mask(const fs::path &dir, const Mask &mask, const std::string &quantity)
{
  Volume<double> v(mask.dims(), mask.voxel_mm());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    v[i] = mask[i] != 0 ? 1.0 : 0.0;
  }
  write_real_volume(dir, v, quantity);
}

Mask read_mask(const fs::path &dir)
{
  const auto v = read_real_volume(dir);
  Mask m(v.dims(), v.voxel_mm());
  for (std::size_t i = 0; i < v.size(); ++i) {
    m[i] = v[i] > 0.5 ? 1 : 0;
  }
  return m;
}

}  // namespace wumrsi::spectral
