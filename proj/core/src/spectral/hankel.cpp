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

#include "wumrsi/spectral/hankel.hpp"

#include <string>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::spectral {

namespace {

void check_rows(Eigen::Index n, Eigen::Index rows)
{
  if (rows <= 1 || rows >= n) {
    throw InvalidArgument("hankel: rows " + std::to_string(rows) + " outside (1, " + std::to_string(n) + ")");
  }
}

std::span<cplx> as_span(Eigen::VectorXcd &v)
{
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

Eigen::MatrixXcd build_hankel(std::span<const cplx> samples, Eigen::Index rows)
{
  const auto n = static_cast<Eigen::Index>(samples.size());
  check_rows(n, rows);
  const Eigen::Index cols = n - rows + 1;
  Eigen::MatrixXcd h(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      h(i, j) = samples[static_cast<std::size_t>(i + j)];
    }
  }
  return h;
}

Eigen::MatrixXcd build_hankel(const Fid &fid, Eigen::Index rows)
{
  const auto &s = fid.samples();
  return build_hankel(std::span<const cplx>(s.data(), static_cast<std::size_t>(s.size())), rows);
}

HankelOperator::HankelOperator(std::span<const cplx> samples, Eigen::Index rows)
    : n_(static_cast<Eigen::Index>(samples.size())), rows_(rows), cols_(0), pad_(0)
{
  check_rows(n_, rows);
  cols_ = n_ - rows_ + 1;
  // Circular convolution of length >= n leaves indices [cols-1, n-1] alias free.
  pad_ = fft::good_size(static_cast<std::size_t>(n_));
  signal_hat_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pad_));
  for (Eigen::Index k = 0; k < n_; ++k) {
    signal_hat_(k) = samples[static_cast<std::size_t>(k)];
  }
  fft::transform(as_span(signal_hat_), fft::Direction::forward);
}

Eigen::VectorXcd HankelOperator::apply(const Eigen::VectorXcd &v) const
{
  if (v.size() != cols_) {
    throw InvalidArgument("hankel apply: length mismatch");
  }
  Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pad_));
  for (Eigen::Index j = 0; j < cols_; ++j) {
    buf(j) = v(cols_ - 1 - j);
  }
  fft::transform(as_span(buf), fft::Direction::forward);
  buf.array() *= signal_hat_.array();
  fft::transform(as_span(buf), fft::Direction::inverse);
  return buf.segment(cols_ - 1, rows_) / static_cast<double>(pad_);
}

Eigen::VectorXcd HankelOperator::apply_adjoint(const Eigen::VectorXcd &u) const
{
  if (u.size() != rows_) {
    throw InvalidArgument("hankel adjoint: length mismatch");
  }
  Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pad_));
  for (Eigen::Index i = 0; i < rows_; ++i) {
    buf(i) = std::conj(u(rows_ - 1 - i));
  }
  fft::transform(as_span(buf), fft::Direction::forward);
  buf.array() *= signal_hat_.array();
  fft::transform(as_span(buf), fft::Direction::inverse);
  return buf.segment(rows_ - 1, cols_).conjugate() / static_cast<double>(pad_);
}

}  // namespace wumrsi::spectral
