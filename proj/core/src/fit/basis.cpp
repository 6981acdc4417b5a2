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

#include "wumrsi/fit/basis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wumrsi/common/error.hpp"
#include "wumrsi/phantom/simulate.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::fit {

BasisSet::BasisSet(std::vector<std::string> names, Eigen::MatrixXcd fids, AcquisitionParams params, double te_ms)
    : names_(std::move(names)), fids_(std::move(fids)), params_(params), te_ms_(te_ms)
{
  params_.validate();
  if (names_.empty()) {
    throw InvalidArgument("basis: no entries");
  }
  if (static_cast<std::size_t>(fids_.cols()) != names_.size() ||
      static_cast<std::size_t>(fids_.rows()) != params_.n_points) {
    throw InvalidArgument("basis: fid matrix must be n_points x entries");
  }
  if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size()) {
    throw InvalidArgument("basis: entry names must be unique");
  }
  if (!fids_.allFinite()) {
    throw InvalidArgument("basis: non-finite samples");
  }
}

Spectrum BasisSet::spectrum(std::size_t j) const
{
  return spectral::fid_to_spectrum(spectral::Fid(fids_.col(static_cast<Eigen::Index>(j)), params_));
}

std::size_t BasisSet::index_of(const std::string &name) const
{
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw InvalidArgument("basis: no entry named '" + name + "'");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

BasisSet make_basis(const std::vector<phantom::Resonance> &lines, const AcquisitionParams &params)
{
  std::vector<std::string> order;
  std::map<std::string, std::vector<phantom::Resonance>> groups;
  for (const auto &r : lines) {
    r.validate();
    if (groups.find(r.name) == groups.end()) {
      order.push_back(r.name);
    }
    groups[r.name].push_back(r);
  }
  Eigen::MatrixXcd fids(static_cast<Eigen::Index>(params.n_points), static_cast<Eigen::Index>(order.size()));
  for (std::size_t j = 0; j < order.size(); ++j) {
    auto group = groups[order[j]];
    double total = 0.0;
    for (const auto &r : group) {
      total += r.amplitude;
    }
    for (auto &r : group) {
      r.amplitude = total > 0.0 ? r.amplitude / total : 1.0 / static_cast<double>(group.size());
    }
    fids.col(static_cast<Eigen::Index>(j)) = phantom::synthesize(group, params);
  }
  return {order, fids, params, params.te_ms};
}

BasisSet default_basis(const AcquisitionParams &params, bool glioma)
{
  std::vector<phantom::Resonance> lines;
  for (const auto &r : phantom::default_metabolite_panel()) {
    if (!glioma && r.name == "2HG") {
      continue;
    }
    lines.push_back(r);
  }
  return make_basis(lines, params);
}

}  // namespace wumrsi::fit
