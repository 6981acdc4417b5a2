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

#include "wumrsi/mwf/phantom.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/rng.hpp"
#include "wumrsi/qsm/phantom.hpp"

namespace wumrsi::mwf {

void TwoPoolPhantomConfig::validate() const
{
  if (dims.size() == 0 || !(mask_fill > 0.0 && mask_fill <= 1.5)) {
    throw InvalidArgument("two-pool phantom: empty grid or invalid mask fill");
  }
  if (!(mwf >= 0.0 && mwf <= 1.0) || !(t2s_fast_ms > 0.0) || !(t2s_slow_ms > t2s_fast_ms) || !(s0 > 0.0)) {
    throw InvalidArgument("two-pool phantom: need mwf in [0, 1], 0 < T2*fast < T2*slow and s0 > 0");
  }
  if (!(snr >= 0.0)) {
    throw InvalidArgument("two-pool phantom: snr must be non-negative");
  }
}

DecayVolume make_two_pool_phantom(const TwoPoolPhantomConfig &cfg)
{
  cfg.validate();
  DecayVolume out;
  out.te_ms = cfg.te_ms.empty() ? qsm::default_echo_times() : cfg.te_ms;
  const Dims3 d = cfg.dims;
  out.mask = Mask(d, cfg.voxel_mm, 0);
  const double hx = 0.5 * static_cast<double>(d.nx);
  const double hy = 0.5 * static_cast<double>(d.ny);
  const double hz = 0.5 * static_cast<double>(d.nz);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto c = out.mask.coords(i);
    const double x = (static_cast<double>(c[0]) + 0.5 - hx) / (hx * cfg.mask_fill);
    const double y = (static_cast<double>(c[1]) + 0.5 - hy) / (hy * cfg.mask_fill);
    const double z = (static_cast<double>(c[2]) + 0.5 - hz) / (hz * cfg.mask_fill);
    out.mask[i] = x * x + y * y + z * z <= 1.0 ? 1 : 0;
  }

  const bool noisy = cfg.snr > 0.0 && std::isfinite(cfg.snr);
  const double sigma = noisy ? cfg.s0 / cfg.snr : 0.0;
  Rng rng = substream(cfg.seed, "mwf.phantom.noise");
  std::normal_distribution<double> noise(0.0, 1.0);
  for (const double te : out.te_ms) {
    Volume<double> mag(d, cfg.voxel_mm, 0.0);
    const double s = cfg.s0 * (cfg.mwf * std::exp(-te / cfg.t2s_fast_ms) + (1.0 - cfg.mwf) * std::exp(-te / cfg.t2s_slow_ms));
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::complex<double> v = out.mask[i] != 0 ? s : 0.0;
      if (noisy) {
        v += std::complex<double>(sigma * noise(rng), sigma * noise(rng));
      }
      mag[i] = std::abs(v);
    }
    out.magnitude.push_back(std::move(mag));
  }
  return out;
}

}  // namespace wumrsi::mwf
