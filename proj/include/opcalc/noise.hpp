/*
   Copyright 2026 The opcalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPCALC_NOISE_HPP
#define OPCALC_NOISE_HPP

#include <cstdint>

#include "opcalc/grid.hpp"

namespace opcalc {

struct NoiseTone {
    double amplitude = 1.0;
    double omega = 1.0;  // rad/s, > 0
    double phase = 0.0;
    bool random_phase = false;  // resolved per trial by the sweep harness
};

/// The perturbation families: a finite sum of sinusoids, discrete white
/// noise w(i) = A n(i) with unit-variance n, or its AR(1) relaxation with
/// lag-1 correlation rho and unit marginal variance.
struct NoiseSpec {
    enum class Kind { None, SinusoidSum, White, Correlated };
    enum class Dist { Gaussian, Rademacher, Uniform };

    Kind kind = Kind::None;
    std::vector<NoiseTone> tones;
    double amplitude = 0.0;
    Dist dist = Dist::Gaussian;
    double rho = 0.0;
};

/// Counter identity of one trial; every sample is a pure function of
/// (seed, cell, trial, index), so results do not depend on scheduling.
struct RngKey {
    std::uint64_t seed = 0;
    std::uint64_t cell = 0;
    std::uint64_t trial = 0;
};

std::uint64_t counter_hash(const RngKey& key, std::uint64_t index, std::uint64_t stream);
double counter_uniform(const RngKey& key, std::uint64_t index, std::uint64_t stream);  // [0,1)
double unit_variate(NoiseSpec::Dist dist, const RngKey& key, std::uint64_t index);

/// Resolve random-phase tones into concrete phases (deterministic in key).
NoiseSpec resolve_phases(const NoiseSpec& spec, const RngKey& key);

/// Sequential sample access.  Correlated noise carries recurrence state, so
/// values must be pulled in index order within one stream.
class NoiseStream {
  public:
    NoiseStream(const NoiseSpec& spec, const RngKey& key);
    double next(std::uint64_t index, double t);

  private:
    NoiseSpec spec_;
    RngKey key_;
    double ar_state_ = 0.0;
    bool ar_started_ = false;
};

SampledSignal gen_noise(const NoiseSpec& spec, const Grid& grid, const RngKey& key);

}  // namespace opcalc

#endif
