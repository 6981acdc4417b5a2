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

#include "wumrsi/qsm/echo_volume.hpp"

#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/wmk.hpp"

namespace wumrsi::qsm {

void EchoVolume::validate() const
{
  if (te_ms.empty()) {
    throw InvalidArgument("echo volume: no echoes");
  }
  if (magnitude.size() != te_ms.size() || phase.size() != te_ms.size()) {
    throw InvalidArgument("echo volume: magnitude/phase/TE counts differ");
  }
  for (std::size_t e = 0; e < te_ms.size(); ++e) {
    if (e > 0 && !(te_ms[e] > te_ms[e - 1])) {
      throw InvalidArgument("echo volume: echo times must be strictly increasing");
    }
    require_same_grid(magnitude[e], magnitude.front(), "echo volume");
    require_same_grid(phase[e], magnitude.front(), "echo volume");
    for (double p : phase[e].values()) {
      if (!(std::abs(p) <= std::numbers::pi + 1e-9)) {
        throw InvalidArgument("echo volume: phase outside [-pi, pi]");
      }
    }
  }
}

double wrap_to_pi(double phase) noexcept
{
  return std::remainder(phase, 2.0 * std::numbers::pi);
}

EchoVolume fid_volume_to_echoes(const spectral::SpectralVolume &vol, std::size_t n_echoes)
{
  const auto &p = vol.params();
  if (n_echoes == 0 || n_echoes > p.n_points) {
    throw InvalidArgument("fid_volume_to_echoes: n_echoes must lie in [1, n_points]");
  }
  EchoVolume ev;
  for (std::size_t e = 0; e < n_echoes; ++e) {
    ev.te_ms.push_back(p.te_ms + static_cast<double>(e) * p.dwell_ms());
    Volume<double> mag(vol.dims(), vol.voxel_mm());
    Volume<double> ph(vol.dims(), vol.voxel_mm());
    for (std::size_t v = 0; v < vol.n_voxels(); ++v) {
      const std::complex<double> s = vol.fids()(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(v));
      mag[v] = std::abs(s);
      ph[v] = std::arg(s);
    }
    ev.magnitude.push_back(std::move(mag));
    ev.phase.push_back(std::move(ph));
  }
  return ev;
}

Volume<double> rss_magnitude(const EchoVolume &ev)
{
  ev.validate();
  Volume<double> out(ev.dims(), ev.voxel_mm());
  for (const auto &m : ev.magnitude) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += m[i] * m[i];
    }
  }
  for (auto &v : out.values()) {
    v = std::sqrt(v);
  }
  return out;
}

void write_echo_volume(const std::filesystem::path &dir, const EchoVolume &ev, const Mask *mask)
{
  ev.validate();
  spectral::WmkData data;
  data.header.dims = ev.dims();
  data.header.voxel_mm = ev.voxel_mm();
  data.header.n_samples = ev.n_echoes();
  data.header.dtype = spectral::WmkDtype::complex64;
  data.header.domain = spectral::WmkDomain::echo;
  data.header.te_list_ms = ev.te_ms;
  data.header.acquisition.te_ms = ev.te_ms.front();
  data.header.quantity = "multi_echo";
  const std::size_t nv = ev.dims().size();
  data.complex_samples.resize(nv * ev.n_echoes());
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t e = 0; e < ev.n_echoes(); ++e) {
      data.complex_samples[v * ev.n_echoes() + e] = std::polar(ev.magnitude[e][v], ev.phase[e][v]);
    }
  }
  if (mask != nullptr) {
    data.brain_mask = *mask;
  }
  spectral::write_wmk(dir, data);
}

EchoVolume read_echo_volume(const std::filesystem::path &dir, Mask *mask)
{
  const spectral::WmkData data = spectral::read_wmk(dir);
  const auto &h = data.header;
  if (h.dtype != spectral::WmkDtype::complex64) {
    throw IoError(dir.string() + ": echo volume must be complex64");
  }
  EchoVolume ev;
  ev.te_ms = h.te_list_ms;
  if (ev.te_ms.size() != h.n_samples) {
    if (h.domain != spectral::WmkDomain::time) {
      throw IoError(dir.string() + ": te_list_ms must list every echo");
    }
    // Time-domain spectroscopic data: echoes follow the dwell time.
    ev.te_ms.clear();
    for (std::size_t e = 0; e < h.n_samples; ++e) {
      ev.te_ms.push_back(h.acquisition.te_ms + static_cast<double>(e) * h.acquisition.dwell_ms());
    }
  }
  for (std::size_t e = 0; e < h.n_samples; ++e) {
    Volume<double> mag(h.dims, h.voxel_mm);
    Volume<double> ph(h.dims, h.voxel_mm);
    for (std::size_t v = 0; v < h.dims.size(); ++v) {
      const auto s = data.complex_samples[v * h.n_samples + e];
      mag[v] = std::abs(s);
      ph[v] = std::arg(s);
    }
    ev.magnitude.push_back(std::move(mag));
    ev.phase.push_back(std::move(ph));
  }
  if (mask != nullptr) {
    *mask = data.brain_mask ? *data.brain_mask : Mask(h.dims, h.voxel_mm, 1);
  }
  ev.validate();
  return ev;
}

void write_series(const std::filesystem::path &dir, const std::vector<Volume<double>> &series,
                  const std::vector<double> &te_ms, const std::string &quantity)
{
  if (series.empty() || series.size() != te_ms.size()) {
    throw InvalidArgument("write_series: series and TE list must be non-empty and equal length");
  }
  spectral::WmkData data;
  data.header.dims = series.front().dims();
  data.header.voxel_mm = series.front().voxel_mm();
  data.header.n_samples = series.size();
  data.header.dtype = spectral::WmkDtype::float32;
  data.header.domain = spectral::WmkDomain::echo;
  data.header.te_list_ms = te_ms;
  data.header.acquisition.te_ms = te_ms.front();
  data.header.quantity = quantity;
  const std::size_t nv = data.header.dims.size();
  data.real_samples.resize(nv * series.size());
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t e = 0; e < series.size(); ++e) {
      data.real_samples[v * series.size() + e] = series[e][v];
    }
  }
  spectral::write_wmk(dir, data);
}

}  // namespace wumrsi::qsm
