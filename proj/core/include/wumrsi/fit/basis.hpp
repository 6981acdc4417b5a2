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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wumrsi/phantom/resonance.hpp"
#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::fit {

using spectral::AcquisitionParams;
using spectral::Spectrum;

/// Metabolite basis: one unit-amplitude FID per named entry, all on one axis.
class BasisSet
{
 public:
  BasisSet(std::vector<std::string> names, Eigen::MatrixXcd fids, AcquisitionParams params, double te_ms);

  [[nodiscard]] const std::vector<std::string> &names() const noexcept { return names_; }
  [[nodiscard]] const Eigen::MatrixXcd &fids() const noexcept { return fids_; }
  [[nodiscard]] Spectrum spectrum(std::size_t j) const;
  [[nodiscard]] const AcquisitionParams &params() const noexcept { return params_; }
  [[nodiscard]] double te_ms() const noexcept { return te_ms_; }
  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
  /// Index of `name`; throws InvalidArgument if absent.
  [[nodiscard]] std::size_t index_of(const std::string &name) const;

 private:
  std::vector<std::string> names_;
  Eigen::MatrixXcd fids_;  // n x J
  AcquisitionParams params_;
  double te_ms_;
};

/// Groups lines by name; each group becomes one entry whose line amplitudes
/// are normalized to sum to one.
[[nodiscard]] BasisSet make_basis(const std::vector<phantom::Resonance> &lines, const AcquisitionParams &params);

/// Basis from the default metabolite panel; 2HG is dropped unless `glioma`.
[[nodiscard]] BasisSet default_basis(const AcquisitionParams &params, bool glioma = true);

}  // namespace wumrsi::fit
