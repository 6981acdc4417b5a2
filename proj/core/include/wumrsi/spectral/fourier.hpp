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
#include <cstddef>
#include <span>

#include "wumrsi/common/volume.hpp"
#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::spectral {

/// Unitary DFT with exp(-i 2 pi k n / N) kernel followed by fftshift, so a
/// signal exp(+i 2 pi f t) peaks at offset +f and therefore at higher ppm.
[[nodiscard]] Spectrum fid_to_spectrum(const Fid &fid);

/// Exact inverse of fid_to_spectrum.
[[nodiscard]] Fid spectrum_to_fid(const Spectrum &spec);

namespace fft {

enum class Direction { forward, inverse };

/// Unnormalized in-place 1D transform (FFTW sign convention: forward = -1).
void transform(std::span<std::complex<double>> data, Direction dir);

/// Unnormalized in-place 3D transform of an x-fastest grid.
void transform3(std::span<std::complex<double>> data, const Dims3 &dims, Direction dir);

/// Circular shift moving index 0 to floor(n/2), and its inverse.
void fftshift(std::span<std::complex<double>> data);
void ifftshift(std::span<std::complex<double>> data);

/// Smallest 2^a 3^b 5^c 7^d not below n.
[[nodiscard]] std::size_t good_size(std::size_t n);

/// Signed frequency index of bin k in FFT ordering (k or k - n).
[[nodiscard]] inline double signed_index(std::size_t k, std::size_t n) noexcept
{
  return k <= (n - 1) / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

}  // namespace fft
}  // namespace wumrsi::spectral
