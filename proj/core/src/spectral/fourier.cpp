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

#include "wumrsi/spectral/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "wumrsi/common/error.hpp"

namespace wumrsi::spectral {
namespace fft {
namespace {

// Planning is not thread-safe in FFTW; execution of an existing plan on new
// arrays via the guru new-array interface is. Plans are made once per shape
// on an internal scratch buffer and kept for the process lifetime.
struct PlanKey {
  int rank;
  int n0, n1, n2;
  int sign;
  auto operator<=>(const PlanKey &) const = default;
};

std::mutex plan_mutex;

fftw_plan plan_for(const PlanKey &key)
{
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) {
    return it->second;
  }
  const std::size_t total = static_cast<std::size_t>(key.n0) * static_cast<std::size_t>(key.n1) *
                            static_cast<std::size_t>(key.n2);
  auto *scratch = fftw_alloc_complex(total);
  const int dims[3] = {key.n0, key.n1, key.n2};
  const int *first = dims + (3 - key.rank);
  fftw_plan p = fftw_plan_dft(key.rank, first, scratch, scratch, key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (p == nullptr) {
    throw NumericalError("fft: plan creation failed");
  }
  cache.emplace(key, p);
  return p;
}

int sign_of(Direction dir)
{
  return dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
}

}  // namespace

void transform(std::span<std::complex<double>> data, Direction dir)
{
  if (data.empty()) {
    return;
  }
  const PlanKey key{1, 1, 1, static_cast<int>(data.size()), sign_of(dir)};
  auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(plan_for(key), ptr, ptr);
}

void transform3(std::span<std::complex<double>> data, const Dims3 &dims, Direction dir)
{
  if (data.size() != dims.size()) {
    throw InvalidArgument("fft3: buffer size does not match dims");
  }
  if (data.empty()) {
    return;
  }
  // FFTW is row-major with the last index fastest, so x goes last.
  const PlanKey key{3, static_cast<int>(dims.nz), static_cast<int>(dims.ny), static_cast<int>(dims.nx),
                    sign_of(dir)};
  auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(plan_for(key), ptr, ptr);
}

void fftshift(std::span<std::complex<double>> data)
{
  std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>((data.size() + 1) / 2), data.end());
}

void ifftshift(std::span<std::complex<double>> data)
{
  std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(data.size() / 2), data.end());
}

std::size_t good_size(std::size_t n)
{
  if (n <= 1) {
    return 1;
  }
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2U, 3U, 5U, 7U}) {
      while (r % p == 0) {
        r /= p;
      }
    }
    if (r == 1) {
      return m;
    }
  }
}

}  // namespace fft

Spectrum fid_to_spectrum(const Fid &fid)
{
  Eigen::VectorXcd v = fid.samples();
  std::span<std::complex<double>> s(v.data(), static_cast<std::size_t>(v.size()));
  fft::transform(s, fft::Direction::forward);
  v /= std::sqrt(static_cast<double>(v.size()));
  fft::fftshift(s);
  return {std::move(v), fid.params()};
}

Fid spectrum_to_fid(const Spectrum &spec)
{
  Eigen::VectorXcd v = spec.bins();
  std::span<std::complex<double>> s(v.data(), static_cast<std::size_t>(v.size()));
  fft::ifftshift(s);
  fft::transform(s, fft::Direction::inverse);
  v /= std::sqrt(static_cast<double>(v.size()));
  return {std::move(v), spec.params()};
}

}  // namespace wumrsi::spectral
