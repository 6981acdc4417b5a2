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
#include <span>

#include <Eigen/Dense>

#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::spectral {

/// H(i, j) = samples[i + j], rows x (n - rows + 1). Requires 1 < rows < n.
[[nodiscard]] Eigen::MatrixXcd build_hankel(const Fid &fid, Eigen::Index rows);
[[nodiscard]] Eigen::MatrixXcd build_hankel(std::span<const cplx> samples, Eigen::Index rows);

[[nodiscard]] inline Eigen::Index default_hankel_rows(Eigen::Index n) noexcept { return n / 2; }

/// Matrix-free Hankel operator. Products with H and H^H cost two FFTs of a
/// padded length instead of O(rows * cols).
class HankelOperator
{
 public:
  HankelOperator(std::span<const cplx> samples, Eigen::Index rows);

  [[nodiscard]] Eigen::Index rows() const noexcept { return rows_; }
  [[nodiscard]] Eigen::Index cols() const noexcept { return cols_; }

  /// H v, v of length cols().
  [[nodiscard]] Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;
  /// H^H u, u of length rows().
  [[nodiscard]] Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &u) const;

 private:
  Eigen::Index n_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::size_t pad_;
  Eigen::VectorXcd signal_hat_;
};

}  // namespace wumrsi::spectral
