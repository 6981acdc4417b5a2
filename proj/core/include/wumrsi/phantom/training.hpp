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

#include "wumrsi/common/rng.hpp"
#include "wumrsi/nuisance/lipid_operator.hpp"
#include "wumrsi/phantom/augment.hpp"
#include "wumrsi/phantom/simulate.hpp"

namespace wumrsi::phantom {

using spectral::Spectrum;

/// Training example; every spectrum is divided by `energy`.
struct TrainingPair {
  Spectrum x1;
  Spectrum x2;
  Spectrum y_truth;
  Spectrum m_truth;  // includes the noise realization so that x1 = y + m
  double energy = 0.0;
};

/// x1 from the phantom, x2 = (I - L) x1, y = w + s + l, all normalized by
/// E = ||x1 - x2||. Throws DegenerateEnergy when E <= 1e-12.
[[nodiscard]] TrainingPair make_training_pair(const PhantomSpec &spec, const nuisance::LipidOperator &lipid_op,
                                              const AcquisitionParams &params);

/// Distribution of random training phantoms.
struct TrainingDrawConfig {
  double min_water_factor = 1.0;
  double max_water_factor = 1e4;  // log-uniform between the two
  double metabolite_scale_min = 0.5;
  double metabolite_scale_max = 1.5;
  double metabolite_damping_min = 12.0;
  double metabolite_damping_max = 30.0;
  double water_damping_min = 10.0;
  double water_damping_max = 30.0;
  double lipid_amp_max = 20.0;  // relative to the metabolite total
  double lipid_damping_min = 40.0;
  double lipid_damping_max = 100.0;
  double noise_sigma_max = 0.05;
  SidebandDrawConfig sidebands{};
  SidebandAugmentConfig augment{};

  void validate() const;
};

[[nodiscard]] PhantomSpec draw_training_spec(const TrainingDrawConfig &cfg, Rng &rng);

/// Random lipid lines (default panel shifts with jitter, random damping,
/// amplitude and phase) scaled so that their amplitudes sum to `total`.
[[nodiscard]] std::vector<Resonance> draw_lipids(double total, double damping_min, double damping_max, Rng &rng);

}  // namespace wumrsi::phantom
