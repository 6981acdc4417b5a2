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

#include "wumrsi/mwf/decay_volume.hpp"

#include <cmath>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/wmk.hpp"

namespace wumrsi::mwf {

void DecayVolume::validate() const
{
  if (te_ms.empty() || magnitude.size() != te_ms.size()) {
    throw InvalidArgument("decay volume: echo count and TE list differ or are empty");
  }
  for (std::size_t e = 0; e < te_ms.size(); ++e) {
    if (e > 0 && !(te_ms[e] > te_ms[e - 1])) {
      throw InvalidArgument("decay volume: echo times must be strictly increasing");
    }
    require_same_grid(magnitude[e], mask, "decay volume");
    for (double v : magnitude[e].values()) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("decay volume: magnitude must be finite and non-negative");
      }
    }
  }
}

std::vector<double> DecayVolume::decay(std::size_t voxel) const
{
  std::vector<double> d(n_echoes());
  for (std::size_t e = 0; e < d.size(); ++e) {
    d[e] = magnitude[e][voxel];
  }
  return d;
}

DecayVolume decay_from_echoes(const qsm::EchoVolume &ev, const Mask &mask)
{
  ev.validate();
  require_same_grid(mask, ev.magnitude.front(), "decay_from_echoes");
  DecayVolume out{ev.magnitude, ev.te_ms, mask};
  out.validate();
  return out;
}

DecayVolume crop_echoes(const DecayVolume &vol, double last_te_ms)
{
  vol.validate();
  if (last_te_ms < vol.te_ms.front()) {
    throw InvalidArgument("crop_echoes: last TE lies before the first echo");
  }
  const double slack = vol.n_echoes() > 1 ? 0.5 * (vol.te_ms[1] - vol.te_ms[0]) : 0.0;
  DecayVolume out;
  out.mask = vol.mask;
  for (std::size_t e = 0; e < vol.n_echoes(); ++e) {
    if (vol.te_ms[e] <= last_te_ms + slack) {
      out.te_ms.push_back(vol.te_ms[e]);
      out.magnitude.push_back(vol.magnitude[e]);
    }
  }
  if (out.n_echoes() < 4) {
    throw InvalidArgument("crop_echoes: fewer than 4 echoes remain");
  }
  return out;
}

void write_decay_volume(const std::filesystem::path &dir, const DecayVolume &vol)
{
  vol.validate();
  spectral::WmkData data;
  data.header.dims = vol.dims();
  data.header.voxel_mm = vol.mask.voxel_mm();
  data.header.n_samples = vol.n_echoes();
  data.header.dtype = spectral::WmkDtype::float32;
  data.header.domain = spectral::WmkDomain::echo;
  data.header.te_list_ms = vol.te_ms;
  data.header.acquisition.te_ms = vol.te_ms.front();
  data.header.quantity = "magnitude_decay";
  const std::size_t nv = vol.dims().size();
  data.real_samples.resize(nv * vol.n_echoes());
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t e = 0; e < vol.n_echoes(); ++e) {
      data.real_samples[v * vol.n_echoes() + e] = vol.magnitude[e][v];
    }
  }
  data.brain_mask = vol.mask;
  spectral::write_wmk(dir, data);
}

DecayVolume read_decay_volume(const std::filesystem::path &dir)
{
  const spectral::WmkData data = spectral::read_wmk(dir);
  const auto &h = data.header;
  if (h.te_list_ms.size() != h.n_samples) {
    throw IoError(dir.string() + ": decay volume needs te_list_ms for every echo");
  }
  DecayVolume out;
  out.te_ms = h.te_list_ms;
  out.mask = data.brain_mask ? *data.brain_mask : Mask(h.dims, h.voxel_mm, 1);
  const bool cplx = h.dtype == spectral::WmkDtype::complex64;
  for (std::size_t e = 0; e < h.n_samples; ++e) {
    Volume<double> mag(h.dims, h.voxel_mm, 0.0);
    for (std::size_t v = 0; v < h.dims.size(); ++v) {
      const std::size_t k = v * h.n_samples + e;
      mag[v] = cplx ? std::abs(data.complex_samples[k]) : std::abs(data.real_samples[k]);
    }
    out.magnitude.push_back(std::move(mag));
  }
  out.validate();
  return out;
}

}  // namespace wumrsi::mwf
