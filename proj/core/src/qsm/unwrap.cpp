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

#include "wumrsi/qsm/unwrap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "wumrsi/common/error.hpp"
#include "wumrsi/qsm/morphology.hpp"

namespace wumrsi::qsm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename F>
void for_neighbours(const Dims3 &d, std::size_t v, F &&f)
{
  const std::size_t x = v % d.nx;
  const std::size_t y = (v / d.nx) % d.ny;
  const std::size_t z = v / (d.nx * d.ny);
  const std::size_t sy = d.nx;
  const std::size_t sz = d.nx * d.ny;
  if (x > 0) f(v - 1);
  if (x + 1 < d.nx) f(v + 1);
  if (y > 0) f(v - sy);
  if (y + 1 < d.ny) f(v + sy);
  if (z > 0) f(v - sz);
  if (z + 1 < d.nz) f(v + sz);
}

double edge_coherence(const EchoVolume &ev, std::size_t a, std::size_t b)
{
  double s = 0.0;
  for (const auto &ph : ev.phase) {
    s += std::cos(ph[b] - ph[a]);
  }
  return s / static_cast<double>(ev.n_echoes());
}

double median(std::vector<double> v)
{
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

Volume<double> phase_quality(const EchoVolume &ev, const Mask &mask)
{
  ev.validate();
  require_same_grid(mask, ev.phase.front(), "phase_quality");
  const Dims3 d = mask.dims();
  Volume<double> q(d, mask.voxel_mm(), 0.0);
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v] == 0) {
      continue;
    }
    double s = 0.0;
    std::size_t n = 0;
    for_neighbours(d, v, [&](std::size_t u) {
      if (mask[u] != 0) {
        s += edge_coherence(ev, v, u);
        ++n;
      }
    });
    q[v] = n == 0 ? 0.0 : std::clamp(s / static_cast<double>(n), 0.0, 1.0);
  }
  return q;
}

UnwrapResult unwrap_phase(const EchoVolume &ev, const Mask &mask)
{
  ev.validate();
  require_same_grid(mask, ev.phase.front(), "unwrap_phase");
  if (count(mask) == 0) {
    throw InvalidArgument("unwrap_phase: mask is empty");
  }
  const Dims3 d = mask.dims();
  const std::size_t ne = ev.n_echoes();

  UnwrapResult out;
  out.quality = phase_quality(ev, mask);
  const Components comp = connected_components(mask);
  out.n_regions = comp.count;
  out.disconnected = comp.count > 1;

  // Seed per region: highest quality, lowest index on ties.
  std::vector<std::size_t> seed(comp.count, 0);
  std::vector<double> best(comp.count, -1.0);
  for (std::size_t v = 0; v < mask.size(); ++v) {
    const auto l = comp.labels[v];
    if (l > 0 && out.quality[v] > best[static_cast<std::size_t>(l - 1)]) {
      best[static_cast<std::size_t>(l - 1)] = out.quality[v];
      seed[static_cast<std::size_t>(l - 1)] = v;
    }
  }

  // Prim's tree on edge coherence; records the visit order and parents.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(mask.size(), kNone);
  std::vector<std::uint8_t> done(mask.size(), 0);
  std::vector<std::vector<std::size_t>> order(comp.count);
  using Edge = std::pair<double, std::pair<std::size_t, std::size_t>>;  // weight, (from, to)
  for (std::size_t r = 0; r < comp.count; ++r) {
    std::priority_queue<Edge> heap;
    heap.push({2.0, {seed[r], seed[r]}});
    while (!heap.empty()) {
      const auto [w, e] = heap.top();
      heap.pop();
      const auto [from, to] = e;
      if (done[to] != 0) {
        continue;
      }
      done[to] = 1;
      parent[to] = from;
      order[r].push_back(to);
      for_neighbours(d, to, [&](std::size_t u) {
        if (mask[u] != 0 && done[u] == 0) {
          heap.push({edge_coherence(ev, to, u), {to, u}});
        }
      });
    }
  }

  out.unwrapped.assign(ne, Volume<double>(d, mask.voxel_mm(), 0.0));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto &ph = ev.phase[e];
    auto &u = out.unwrapped[e];
    for (const auto &ord : order) {
      for (std::size_t v : ord) {
        const std::size_t p = parent[v];
        u[v] = p == v ? ph[v] : u[p] + std::remainder(ph[v] - ph[p], kTwoPi);
      }
    }
  }

  // Temporal alignment: echo 1 against echo 0, later echoes against the
  // linear extrapolation of the two previous ones.
  const auto &te = ev.te_ms;
  for (const auto &ord : order) {
    std::vector<double> diff(ord.size());
    for (std::size_t e = 1; e < ne; ++e) {
      auto &cur = out.unwrapped[e];
      const auto &p1 = out.unwrapped[e - 1];
      for (std::size_t k = 0; k < ord.size(); ++k) {
        const std::size_t v = ord[k];
        double predicted = p1[v];
        if (e >= 2) {
          const auto &p2 = out.unwrapped[e - 2];
          predicted += (p1[v] - p2[v]) * (te[e] - te[e - 1]) / (te[e - 1] - te[e - 2]);
        }
        diff[k] = predicted - cur[v];
      }
      const double shift = kTwoPi * std::round(median(diff) / kTwoPi);
      if (shift != 0.0) {
        for (std::size_t v : ord) {
          cur[v] += shift;
        }
      }
    }
  }
  return out;
}

}  // namespace wumrsi::qsm
