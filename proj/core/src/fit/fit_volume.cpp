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


#include "wumrsi/fit/fit_volume.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/parallel.hpp"
#include "wumrsi/fit/quality.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::fit {

FitMaps fit_volume(const spectral::SpectralVolume &vol, const BasisSet &basis, const FitConfig &cfg,
                   double noise_sigma, unsigned threads)
{
  cfg.validate();
  if (!(vol.params() == basis.params())) {
    throw InvalidArgument("fit_volume: basis and volume use different spectral axes");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto &dims = vol.dims();
  const auto &vox = vol.voxel_mm();
  FitMaps maps;
  maps.names = basis.names();
  maps.amplitude.assign(basis.size(), Volume<double>(dims, vox, nan));
  maps.crlb_percent.assign(basis.size(), Volume<double>(dims, vox, nan));
  maps.snr = Volume<double>(dims, vox, nan);
  maps.fwhm_ppm = Volume<double>(dims, vox, nan);
  maps.shift_hz = Volume<double>(dims, vox, nan);
  maps.failed = Mask(dims, vox, 0);

  std::vector<std::size_t> brain;
  for (std::size_t v = 0; v < vol.n_voxels(); ++v) {
    if (vol.brain_mask()[v] != 0) {
      brain.push_back(v);
    }
  }
  std::atomic<std::size_t> failed{0};
  parallel_for(brain.size(), threads, [&](std::size_t i) {
    const std::size_t v = brain[i];
    try {
      const Spectrum x = spectral::fid_to_spectrum(vol.fid(v));
      FitResult r = fit_spectrum(x, basis, cfg);
      // real-part std over the noise band is sigma / sqrt(2) for the unitary transform
      const double sigma = noise_sigma > 0.0 ? noise_sigma : std::sqrt(2.0) * noise_std(r.residual);
      if (sigma > 0.0 && std::isfinite(sigma)) {
        r.crlb_rel = compute_crlb(r, basis, sigma);
      }
      for (std::size_t j = 0; j < basis.size(); ++j) {
        maps.amplitude[j][v] = r.amplitudes(static_cast<Eigen::Index>(j));
        maps.crlb_percent[j][v] = r.crlb_rel(static_cast<Eigen::Index>(j));
      }
      maps.snr[v] = r.snr;
      maps.fwhm_ppm[v] = r.fwhm_ppm;
      maps.shift_hz[v] = r.global_shift_hz;
    } catch (const Error &) {
      maps.failed[v] = 1;
      ++failed;
    }
  });
  maps.n_failed = failed.load();
  maps.n_fitted = brain.size() - maps.n_failed;
  return maps;
}

}  // namespace wumrsi::fit
