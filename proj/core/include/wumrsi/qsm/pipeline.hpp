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

#include "wumrsi/qsm/echo_volume.hpp"
#include "wumrsi/qsm/field.hpp"
#include "wumrsi/qsm/morphology.hpp"
#include "wumrsi/qsm/ndi.hpp"
#include "wumrsi/qsm/unwrap.hpp"
#include "wumrsi/qsm/vsharp.hpp"

namespace wumrsi::qsm {

struct QsmConfig {
  double quality_threshold = 0.3;
  double closing_radius = 2.0;  // voxels
  double t2star_ms = 25.0;
  double b0_tesla = 7.0;
  VsharpConfig vsharp;
  NdiConfig ndi;
};

/// Every intermediate of the reconstruction.
struct QsmResult {
  Volume<double> rss;
  UnwrapResult unwrap;
  RefinedMask refined;
  CombinedField field;
  FieldMap local_field;
  Mask final_mask;  // V-SHARP mask without the closed holes
  NdiResult ndi;

  [[nodiscard]] const SusceptibilityMap &chi() const noexcept { return ndi.map; }
};

/// rss -> unwrap -> refine mask -> echo combination -> V-SHARP -> NDI.
/// Failures are rethrown as StageError naming the stage.
[[nodiscard]] QsmResult qsm_pipeline(const EchoVolume &ev, const Mask &mask, const QsmConfig &cfg = {});

}  // namespace wumrsi::qsm
