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

#include <cstddef>

namespace wumrsi::spectral {

/// Sign linking frequency offset and chemical shift: ppm increases with
/// positive frequency offset from the carrier. Every ppm<->Hz conversion in
/// the library goes through AcquisitionParams and therefore this constant.
inline constexpr double kPpmPerHzSign = +1.0;

/// Spectral acquisition metadata. Defaults follow the 7 T FID-MRSI protocol
/// (2280 Hz bandwidth, TE 0.9 ms, 451 points, carrier at water).
struct AcquisitionParams {
  double bandwidth_hz = 2280.0;
  std::size_t n_points = 451;
  double te_ms = 0.9;
  double field_tesla = 7.0;
  double larmor_mhz = 297.2;
  double ref_ppm = 4.7;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;

  [[nodiscard]] double dwell_s() const noexcept { return 1.0 / bandwidth_hz; }
  [[nodiscard]] double dwell_ms() const noexcept { return 1000.0 / bandwidth_hz; }
  [[nodiscard]] double hz_per_bin() const noexcept
  {
    return bandwidth_hz / static_cast<double>(n_points);
  }

  [[nodiscard]] double offset_hz(double ppm) const noexcept
  {
    return kPpmPerHzSign * (ppm - ref_ppm) * larmor_mhz;
  }
  [[nodiscard]] double ppm_of_offset(double hz) const noexcept
  {
    return ref_ppm + kPpmPerHzSign * hz / larmor_mhz;
  }

  /// Centered frequency offset of bin k after the fftshift (bin n/2 is DC).
  [[nodiscard]] double bin_offset_hz(std::size_t k) const noexcept
  {
    return (static_cast<double>(k) - static_cast<double>(n_points / 2)) * hz_per_bin();
  }
  [[nodiscard]] double bin_ppm(std::size_t k) const noexcept { return ppm_of_offset(bin_offset_hz(k)); }

  friend bool operator==(const AcquisitionParams &, const AcquisitionParams &) = default;
};

/// 3.4 mm protocol: 451 time points.
[[nodiscard]] AcquisitionParams protocol_451();
/// 2 mm protocol: 399 time points.
[[nodiscard]] AcquisitionParams protocol_399();

}  // namespace wumrsi::spectral
