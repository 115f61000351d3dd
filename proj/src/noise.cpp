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

#include "opcalc/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace opcalc {

namespace {

inline std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53

}  // namespace

std::uint64_t counter_hash(const RngKey& key, std::uint64_t index, std::uint64_t stream) {
    std::uint64_t h = splitmix(key.seed ^ 0x8f1bbcdcbfa53e0bull);
    h = splitmix(h ^ key.cell);
    h = splitmix(h ^ key.trial);
    h = splitmix(h ^ index);
    h = splitmix(h ^ stream);
    return h;
}

double counter_uniform(const RngKey& key, std::uint64_t index, std::uint64_t stream) {
    return static_cast<double>(counter_hash(key, index, stream) >> 11) * kInv53;
}

double unit_variate(NoiseSpec::Dist dist, const RngKey& key, std::uint64_t index) {
    switch (dist) {
        case NoiseSpec::Dist::Gaussian: {
            double u1 = (static_cast<double>(counter_hash(key, index, 0) >> 11) + 1.0) * kInv53;
            double u2 = counter_uniform(key, index, 1);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        }
        case NoiseSpec::Dist::Rademacher:
            return counter_uniform(key, index, 0) < 0.5 ? -1.0 : 1.0;
        case NoiseSpec::Dist::Uniform:
            // variance 1/12 stretched to unit variance
            return (counter_uniform(key, index, 0) - 0.5) * std::sqrt(12.0);
    }
    throw std::logic_error("unreachable");
}

NoiseSpec resolve_phases(const NoiseSpec& spec, const RngKey& key) {
    NoiseSpec out = spec;
    for (std::size_t i = 0; i < out.tones.size(); ++i) {
        if (!out.tones[i].random_phase) continue;
        out.tones[i].phase = 2.0 * M_PI * counter_uniform(key, i, 7);
        out.tones[i].random_phase = false;
    }
    return out;
}

NoiseStream::NoiseStream(const NoiseSpec& spec, const RngKey& key)
    : spec_(resolve_phases(spec, key)), key_(key) {
    if (spec_.kind == NoiseSpec::Kind::Correlated &&
        (spec_.rho <= -1.0 || spec_.rho >= 1.0))
        throw std::invalid_argument("AR coefficient must lie in (-1, 1)");
    for (const auto& t : spec_.tones)
        if (t.omega <= 0.0) throw std::invalid_argument("noise tone frequency must be positive");
}

double NoiseStream::next(std::uint64_t index, double t) {
    switch (spec_.kind) {
        case NoiseSpec::Kind::None:
            return 0.0;
        case NoiseSpec::Kind::SinusoidSum: {
            double acc = 0.0;
            for (const auto& tone : spec_.tones)
                acc += tone.amplitude * std::sin(tone.omega * t + tone.phase);
            return acc;
        }
        case NoiseSpec::Kind::White:
            return spec_.amplitude * unit_variate(spec_.dist, key_, index);
        case NoiseSpec::Kind::Correlated: {
            double e = unit_variate(NoiseSpec::Dist::Gaussian, key_, index);
            if (!ar_started_) {
                ar_state_ = e;  // stationary start keeps the marginal variance at 1
                ar_started_ = true;
            } else {
                ar_state_ = spec_.rho * ar_state_ + std::sqrt(1.0 - spec_.rho * spec_.rho) * e;
            }
            return spec_.amplitude * ar_state_;
        }
    }
    throw std::logic_error("unreachable");
}

SampledSignal gen_noise(const NoiseSpec& spec, const Grid& grid, const RngKey& key) {
    SampledSignal out{grid, std::vector<double>(grid.count)};
    NoiseStream stream(spec, key);
    for (std::size_t i = 0; i < grid.count; ++i)
        out.values[i] = stream.next(i, grid.time_at(i));
    return out;
}

}  // namespace opcalc
