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

#include "wumrsi/qsm/pipeline.hpp"

#include "wumrsi/common/error.hpp"

namespace wumrsi::qsm {
namespace {

template <typename F>
auto stage(const char *name, F &&f) -> decltype(f())
{
  try {
    return f();
  } catch (const StageError &) {
    throw;
  } catch (const Error &e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

QsmResult qsm_pipeline(const EchoVolume &ev, const Mask &mask, const QsmConfig &cfg)
{
  stage("input", [&] {
    ev.validate();
    require_same_grid(mask, ev.phase.front(), "qsm input");
    return 0;
  });
  QsmResult r;
  r.rss = stage("rss", [&] { return rss_magnitude(ev); });
  if (count(mask) == 0) {
    throw StageError("refine", "mask is empty");
  }
  r.unwrap = stage("unwrap", [&] { return unwrap_phase(ev, mask); });
  r.refined = stage("refine", [&] {
    return refine_mask(mask, r.unwrap.quality, cfg.quality_threshold, cfg.closing_radius);
  });
  r.field = stage("combine", [&] {
    return combine_echoes(r.unwrap.unwrapped, ev.te_ms, r.refined.refined, cfg.t2star_ms);
  });
  r.local_field = stage("vsharp", [&] { return vsharp(r.field.field, cfg.vsharp); });

  r.final_mask = r.local_field.mask;
  for (std::size_t i = 0; i < r.final_mask.size(); ++i) {
    if (r.refined.holes[i] != 0) {
      r.final_mask[i] = 0;
    }
  }
  FieldMap ndi_input{r.local_field.values, r.final_mask};
  r.ndi = stage("ndi", [&] {
    if (count(r.final_mask) == 0) {
      throw InvalidArgument("final mask is empty");
    }
    return ndi_invert(ndi_input, r.rss, r.field.te_eff_ms, cfg.b0_tesla, cfg.ndi);
  });
  return r;
}

}  // namespace wumrsi::qsm
