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

#include <optional>
#include <string>
#include <vector>

#include "wumrsi/mwf/biexp.hpp"
#include "wumrsi/mwf/decay_volume.hpp"
#include "wumrsi/mwf/rpca.hpp"

namespace wumrsi::mwf {

/// Gradient-echo images get the k-space window; spectroscopic echoes do not.
enum class InputKind { gre, mrsi };

[[nodiscard]] std::string to_string(InputKind k);
[[nodiscard]] InputKind parse_input_kind(const std::string &s);

struct MwfConfig {
  InputKind input = InputKind::mrsi;
  double tukey_alpha = 0.4;
  std::optional<double> last_te_ms;
  bool rpca = true;
  RpcaConfig rpca_config;
  BiexpBounds bounds;
  unsigned threads = 0;
};

/// Voxel-wise two-pool maps; NaN outside the mask or where the fit is void.
struct MwfMap {
  Volume<double> mwf;
  Volume<double> t2s_fast_ms;
  Volume<double> t2s_slow_ms;
  Volume<double> amp_fast;
  Volume<double> amp_slow;
  Mask mask;
};

struct MwfResult {
  MwfMap map;
  std::vector<std::string> stages;  // stages that ran, in order
  std::size_t rpca_patches = 0;
  std::size_t rpca_unconverged = 0;
};

/// tukey (GRE input only) -> crop -> rpca -> biexp per voxel.
/// Failures are rethrown as StageError naming the stage.
[[nodiscard]] MwfResult mwf_pipeline(const DecayVolume &vol, const MwfConfig &cfg = {});

/// Mean of the finite map values inside the mask.
[[nodiscard]] double masked_mean(const Volume<double> &map, const Mask &mask);

}  // namespace wumrsi::mwf
