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

#include "wumrsi/phantom/simulate.hpp"

#include <cmath>
#include <numbers>

namespace wumrsi::phantom {

void add_damped_exponential(Eigen::VectorXcd &out, std::complex<double> a, double freq_hz, double damping_hz,
                            double dt)
{
  const std::complex<double> z =
      std::exp(std::complex<double>(-damping_hz * dt, 2.0 * std::numbers::pi * freq_hz * dt));
  // Re-anchor every 64 samples to keep the recurrence error at rounding level.
  std::complex<double> term = a;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    if (k % 64 == 0 && k > 0) {
      const double t = static_cast<double>(k) * dt;
      term = a * std::exp(std::complex<double>(-damping_hz * t, 2.0 * std::numbers::pi * freq_hz * t));
    }
    out(k) += term;
    term *= z;
  }
}

Eigen::VectorXcd synthesize(const std::vector<Resonance> &lines, const AcquisitionParams &params)
{
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n_points));
  for (const auto &r : lines) {
    if (r.amplitude == 0.0) {
      continue;
    }
    add_damped_exponential(out, std::polar(r.amplitude, r.phase_rad), params.offset_hz(r.shift_ppm), r.damping_hz,
                           params.dwell_s());
  }
  return out;
}

Eigen::VectorXcd synthesize_sidebands(const std::vector<SidebandComponent> &sidebands,
                                      std::complex<double> water_amp, double water_hz,
                                      const AcquisitionParams &params)
{
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n_points));
  const double dt = params.dwell_s();
  for (const auto &c : sidebands) {
    const std::complex<double> a = water_amp * c.amplitude_frac;
    add_damped_exponential(out, a * std::polar(1.0, c.phase_rad), water_hz + c.offset_hz, c.decay_hz, dt);
    if (c.mirrored) {
      add_damped_exponential(out, -a * std::polar(1.0, -c.phase_rad), water_hz - c.offset_hz, c.decay_hz, dt);
    }
  }
  return out;
}

Eigen::VectorXcd complex_noise(Eigen::Index n, double sigma, Rng &rng)
{
  Eigen::VectorXcd out(n);
  std::normal_distribution<double> g(0.0, sigma / std::sqrt(2.0));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = g(rng);
    const double im = g(rng);
    out(k) = {re, im};
  }
  return out;
}

SimulatedFid simulate_fid(const PhantomSpec &spec, const AcquisitionParams &params)
{
  spec.validate();
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.n_points);

  const std::complex<double> water_amp = std::polar(spec.water_amplitude(), spec.water_phase_rad);
  const double water_hz = params.offset_hz(kWaterPpm);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  if (std::abs(water_amp) > 0.0) {
    add_damped_exponential(w, water_amp, water_hz, spec.water_damping_hz, params.dwell_s());
  }
  Eigen::VectorXcd s = synthesize_sidebands(spec.sidebands, water_amp, water_hz, params);
  Eigen::VectorXcd l = synthesize(spec.lipids, params);
  Eigen::VectorXcd m = synthesize(spec.metabolites, params);
  Eigen::VectorXcd noise = Eigen::VectorXcd::Zero(n);
  if (spec.noise_sigma > 0.0) {
    Rng rng = substream(spec.seed, "phantom.noise");
    noise = complex_noise(n, spec.noise_sigma, rng);
  }
  Eigen::VectorXcd total = w + s + l + m + noise;
  return {Fid(std::move(total), params), Fid(std::move(w), params), Fid(std::move(s), params),
          Fid(std::move(l), params),     Fid(std::move(m), params), Fid(std::move(noise), params)};
}

}  // namespace wumrsi::phantom
