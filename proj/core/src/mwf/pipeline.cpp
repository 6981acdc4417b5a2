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

#include "wumrsi/mwf/pipeline.hpp"

#include <cmath>
#include <limits>

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/parallel.hpp"
#include "wumrsi/mwf/tukey.hpp"

namespace wumrsi::mwf {

std::string to_string(InputKind k)
{
  return k == InputKind::gre ? "gre" : "mrsi";
}

InputKind parse_input_kind(const std::string &s)
{
  if (s == "gre") {
    return InputKind::gre;
  }
  if (s == "mrsi" || s == "wu-mrsi") {
    return InputKind::mrsi;
  }
  throw InvalidArgument("unknown MWF input kind '" + s + "' (expected gre or mrsi)");
}

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

MwfResult mwf_pipeline(const DecayVolume &vol, const MwfConfig &cfg)
{
  stage("input", [&] {
    vol.validate();
    cfg.bounds.validate();
    cfg.rpca_config.validate();
    return 0;
  });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MwfResult res;
  const Dims3 d = vol.dims();
  const VoxelSize vs = vol.mask.voxel_mm();
  res.map = {Volume<double>(d, vs, nan), Volume<double>(d, vs, nan), Volume<double>(d, vs, nan),
             Volume<double>(d, vs, nan), Volume<double>(d, vs, nan), vol.mask};
  if (count(vol.mask) == 0) {
    return res;
  }

  DecayVolume cur = vol;
  if (cfg.input == InputKind::gre) {
    cur = stage("tukey", [&] { return tukey_filter(cur, cfg.tukey_alpha); });
    res.stages.emplace_back("tukey");
  }
  if (cfg.last_te_ms) {
    cur = stage("crop", [&] { return crop_echoes(cur, *cfg.last_te_ms); });
    res.stages.emplace_back("crop");
  }
  if (cfg.rpca) {
    RpcaConfig rc = cfg.rpca_config;
    rc.threads = cfg.threads;
    RpcaResult rr = stage("rpca", [&] { return rpca_denoise(cur, rc); });
    res.rpca_patches = rr.patches.size();
    res.rpca_unconverged = rr.unconverged;
    cur = std::move(rr.denoised);
    res.stages.emplace_back("rpca");
  }

  stage("biexp", [&] {
    const BiexpFitter fitter(cur.te_ms, cfg.bounds);
    std::vector<std::size_t> voxels;
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (cur.mask[v] != 0) {
        voxels.push_back(v);
      }
    }
    parallel_for(voxels.size(), cfg.threads, [&](std::size_t i) {
      const std::size_t v = voxels[i];
      const BiexpFit f = fitter.fit(cur.decay(v));
      res.map.mwf[v] = f.mwf();
      res.map.t2s_fast_ms[v] = f.t2s_fast_ms;
      res.map.t2s_slow_ms[v] = f.t2s_slow_ms;
      res.map.amp_fast[v] = f.amp_fast;
      res.map.amp_slow[v] = f.amp_slow;
    });
    return 0;
  });
  res.stages.emplace_back("biexp");
  return res;
}

double masked_mean(const Volume<double> &map, const Mask &mask)
{
  require_same_grid(map, mask, "masked_mean");
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (mask[i] != 0 && std::isfinite(map[i])) {
      s += map[i];
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(n);
}

}  // namespace wumrsi::mwf
