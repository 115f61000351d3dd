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

#ifndef OPCALC_CARRIER_HPP
#define OPCALC_CARRIER_HPP

#include <complex>

#include "opcalc/grid.hpp"
#include "opcalc/time_ode.hpp"

namespace opcalc {

struct Tone {
    double amplitude = 1.0;
    double omega = 1.0;  // rad/s, > 0
    double phase = 0.0;
};

/// Numeric carrier description.  The removable singularities (sinc and the
/// raised cosine at t = 0) evaluate to their limit values.
struct CarrierSpec {
    enum class Kind { TrigSum, Sinc, RaisedCosine, RationalSpectrum };
    Kind kind = Kind::TrigSum;

    std::vector<Tone> tones;  // TrigSum
    double omega = 1.0;       // Sinc / RaisedCosine

    // RationalSpectrum: transform num(s)/den(s), ascending coefficients,
    // deg num < deg den, simple poles
    std::vector<double> num_coeffs, den_coeffs;
};

double carrier_value(const CarrierSpec& spec, double t);
SampledSignal carrier_sample(const CarrierSpec& spec, const Grid& grid);

/// The defining ODE of a numeric carrier, exact coefficients, for the
/// transform pipeline.  RationalSpectrum carriers have no time ODE here;
/// their relation comes straight from the transform.
TimeOde carrier_ode(const CarrierSpec& spec);

/// Simple roots of a real polynomial (ascending coefficients) via the
/// Weierstrass simultaneous iteration.  Throws when roots cluster.
std::vector<std::complex<double>> simple_roots(const std::vector<double>& ascending);

}  // namespace opcalc

#endif
