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

#include <cstdint>
#include <random>
#include <string_view>

namespace wumrsi {

using Rng = std::mt19937_64;

/// Deterministic generator for a named substream of a root seed.
///
/// Every random draw in the library derives from (root seed, stream name,
/// index), so results never depend on thread scheduling or call order
/// between unrelated consumers.
[[nodiscard]] Rng substream(std::uint64_t root_seed, std::string_view name, std::uint64_t index = 0);

[[nodiscard]] std::uint64_t mix_seed(std::uint64_t root_seed, std::string_view name, std::uint64_t index);

[[nodiscard]] inline double uniform(Rng &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace wumrsi
