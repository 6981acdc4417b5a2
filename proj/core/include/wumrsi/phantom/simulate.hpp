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

#include <Eigen/Dense>

#include "wumrsi/common/rng.hpp"
#include "wumrsi/phantom/resonance.hpp"
#include "wumrsi/spectral/signal.hpp"

namespace wumrsi::phantom {

using spectral::AcquisitionParams;
using spectral::Fid;

/// x1 = w + s + l + m + noise, with every term kept.
struct SimulatedFid {
  Fid total;
  Fid water;
  Fid sidebands;
  Fid lipids;
  Fid metabolites;
  Fid noise;
};

/// Adds a exp((i 2 pi f - damping) k dt) for k = 0..n-1.
void add_damped_exponential(Eigen::VectorXcd &out, std::complex<double> a, double freq_hz, double damping_hz,
                            double dt);

/// FID of a resonance list on the given axis.
[[nodiscard]] Eigen::VectorXcd synthesize(const std::vector<Resonance> &lines, const AcquisitionParams &params);

/// Sideband FID riding on a water line of complex amplitude water_amp at
/// water_hz.
[[nodiscard]] Eigen::VectorXcd synthesize_sidebands(const std::vector<SidebandComponent> &sidebands,
                                                    std::complex<double> water_amp, double water_hz,
                                                    const AcquisitionParams &params);

/// Circular complex white noise with E|n|^2 = sigma^2.
[[nodiscard]] Eigen::VectorXcd complex_noise(Eigen::Index n, double sigma, Rng &rng);

[[nodiscard]] SimulatedFid simulate_fid(const PhantomSpec &spec, const AcquisitionParams &params);

}  // namespace wumrsi::phantom
