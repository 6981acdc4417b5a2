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

#include "wumrsi/phantom/training.hpp"

#include <cmath>
#include <numbers>

#include "wumrsi/common/error.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::phantom {

TrainingPair make_training_pair(const PhantomSpec &spec, const nuisance::LipidOperator &lipid_op,
                                const AcquisitionParams &params)
{
  if (static_cast<std::size_t>(lipid_op.size()) != params.n_points) {
    throw InvalidArgument("training pair: lipid operator size does not match the spectral axis");
  }
  const SimulatedFid sim = simulate_fid(spec, params);
  const Eigen::VectorXcd x1 = spectral::fid_to_spectrum(sim.total).bins();
  const Eigen::VectorXcd y_fid =
      sim.water.samples() + sim.sidebands.samples() + sim.lipids.samples();
  const Eigen::VectorXcd y = spectral::fid_to_spectrum(Fid(y_fid, params)).bins();
  const Eigen::VectorXcd m = x1 - y;
  const Eigen::VectorXcd x2 = lipid_op.project(x1);

  const double energy = (x1 - x2).norm();
  if (!(energy > 1e-12)) {
    throw DegenerateEnergy("training pair: normalization energy vanished");
  }
  const double inv = 1.0 / energy;
  return {Spectrum(x1 * inv, params), Spectrum(x2 * inv, params), Spectrum(y * inv, params),
          Spectrum(m * inv, params), energy};
}

void TrainingDrawConfig::validate() const
{
  if (!(min_water_factor > 0.0) || min_water_factor > max_water_factor || max_water_factor > kMaxWaterFactor) {
    throw InvalidArgument("training draw: water factor range must lie in (0, 1e4]");
  }
  if (metabolite_scale_min < 0.0 || metabolite_scale_min > metabolite_scale_max) {
    throw InvalidArgument("training draw: invalid metabolite scale range");
  }
  if (!(metabolite_damping_min > 0.0) || metabolite_damping_min > metabolite_damping_max ||
      !(water_damping_min > 0.0) || water_damping_min > water_damping_max || !(lipid_damping_min > 0.0) ||
      lipid_damping_min > lipid_damping_max) {
    throw InvalidArgument("training draw: invalid damping range");
  }
  if (lipid_amp_max < 0.0 || noise_sigma_max < 0.0) {
    throw InvalidArgument("training draw: lipid amplitude and noise must be non-negative");
  }
  sidebands.validate();
}

std::vector<Resonance> draw_lipids(double total, double damping_min, double damping_max, Rng &rng)
{
  std::vector<Resonance> lines = default_lipid_panel();
  // one tissue compartment: the lines share a zero-order phase
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  double sum = 0.0;
  for (auto &r : lines) {
    r.amplitude *= uniform(rng, 0.5, 1.5);
    r.shift_ppm += uniform(rng, -0.05, 0.05);
    r.damping_hz = uniform(rng, damping_min, damping_max);
    r.phase_rad = phase;
    sum += r.amplitude;
  }
  for (auto &r : lines) {
    r.amplitude *= total / sum;
  }
  return lines;
}

PhantomSpec draw_training_spec(const TrainingDrawConfig &cfg, Rng &rng)
{
  cfg.validate();
  PhantomSpec spec;
  spec.metabolites = default_metabolite_panel();
  double met_total = 0.0;
  for (auto &r : spec.metabolites) {
    r.amplitude *= uniform(rng, cfg.metabolite_scale_min, cfg.metabolite_scale_max);
    r.damping_hz = uniform(rng, cfg.metabolite_damping_min, cfg.metabolite_damping_max);
    met_total += r.amplitude;
  }
  spec.water_amp_factor =
      std::exp(uniform(rng, std::log(cfg.min_water_factor), std::log(cfg.max_water_factor)));
  spec.water_damping_hz = uniform(rng, cfg.water_damping_min, cfg.water_damping_max);
  spec.sidebands = augment_sidebands(draw_sidebands(cfg.sidebands, rng), rng, cfg.augment);
  const double lipid_total = uniform(rng, 0.0, cfg.lipid_amp_max) * met_total;
  if (lipid_total > 0.0) {
    spec.lipids = draw_lipids(lipid_total, cfg.lipid_damping_min, cfg.lipid_damping_max, rng);
  }
  spec.noise_sigma = uniform(rng, 0.0, cfg.noise_sigma_max);
  spec.seed = rng();
  return spec;
}

}  // namespace wumrsi::phantom
