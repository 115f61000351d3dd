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

#include "opcalc/carrier.hpp"

#include <cmath>
#include <stdexcept>

namespace opcalc {

namespace {

std::complex<double> poly_eval(const std::vector<double>& asc, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = asc.rbegin(); it != asc.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& asc) {
    std::vector<double> out;
    for (size_t k = 1; k < asc.size(); ++k) out.push_back(asc[k] * static_cast<double>(k));
    return out;
}

int true_degree(const std::vector<double>& asc) {
    for (int i = static_cast<int>(asc.size()) - 1; i >= 0; --i)
        if (asc[i] != 0.0) return i;
    return -1;
}

}  // namespace

std::vector<std::complex<double>> simple_roots(const std::vector<double>& ascending) {
    int deg = true_degree(ascending);
    if (deg < 1) throw std::invalid_argument("root finding needs degree >= 1");
    std::vector<double> monic(ascending.begin(), ascending.begin() + deg + 1);
    for (auto& c : monic) c /= monic[deg];

    // Weierstrass / Durand-Kerner from staggered points on a circle
    std::vector<std::complex<double>> z(deg);
    double radius = 1.0;
    for (int i = 0; i <= deg - 1; ++i) radius = std::max(radius, std::abs(monic[i]));
    radius = 1.0 + radius;
    for (int i = 0; i < deg; ++i) {
        double ang = (2.0 * M_PI * i) / deg + 0.4;
        z[i] = std::polar(radius * 0.5, ang);
    }
    for (int iter = 0; iter < 400; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < deg; ++i) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= z[i] - z[j];
            std::complex<double> delta = poly_eval(monic, z[i]) / denom;
            z[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14 * radius) break;
    }
    for (int i = 0; i < deg; ++i)
        for (int j = i + 1; j < deg; ++j)
            if (std::abs(z[i] - z[j]) < 1e-7 * radius)
                throw std::domain_error("repeated or clustered poles are not supported");
    return z;
}

double carrier_value(const CarrierSpec& spec, double t) {
    switch (spec.kind) {
        case CarrierSpec::Kind::TrigSum: {
            double acc = 0.0;
            for (const auto& tone : spec.tones)
                acc += tone.amplitude * std::sin(tone.omega * t + tone.phase);
            return acc;
        }
        case CarrierSpec::Kind::Sinc:
            if (t == 0.0) return spec.omega;
            return std::sin(spec.omega * t) / t;
        case CarrierSpec::Kind::RaisedCosine:
            return std::cos(spec.omega * t) / (1.0 + t * t);
        case CarrierSpec::Kind::RationalSpectrum: {
            // partial fractions over the simple poles
            auto poles = simple_roots(spec.den_coeffs);
            auto dprime = poly_derivative(spec.den_coeffs);
            std::complex<double> acc = 0.0;
            for (const auto& lam : poles) {
                std::complex<double> res = poly_eval(spec.num_coeffs, lam) / poly_eval(dprime, lam);
                acc += res * std::exp(lam * t);
            }
            return acc.real();
        }
    }
    throw std::logic_error("unreachable");
}

SampledSignal carrier_sample(const CarrierSpec& spec, const Grid& grid) {
    if (grid.count < 2 || grid.dt <= 0.0) throw std::invalid_argument("invalid grid");
    if (spec.kind == CarrierSpec::Kind::TrigSum && spec.tones.empty())
        throw std::invalid_argument("trig-sum carrier needs at least one tone");
    if (spec.kind == CarrierSpec::Kind::RationalSpectrum) {
        if (true_degree(spec.num_coeffs) >= true_degree(spec.den_coeffs))
            throw std::invalid_argument("rational-spectrum carrier must be strictly proper");
        // resolve the poles once; sampling reuses them
        auto poles = simple_roots(spec.den_coeffs);
        auto dprime = poly_derivative(spec.den_coeffs);
        std::vector<std::complex<double>> residues(poles.size());
        for (size_t i = 0; i < poles.size(); ++i)
            residues[i] = poly_eval(spec.num_coeffs, poles[i]) / poly_eval(dprime, poles[i]);
        SampledSignal out{grid, std::vector<double>(grid.count)};
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.count); ++i) {
            std::complex<double> acc = 0.0;
            double t = grid.time_at(static_cast<std::size_t>(i));
            for (size_t r = 0; r < poles.size(); ++r) acc += residues[r] * std::exp(poles[r] * t);
            out.values[static_cast<std::size_t>(i)] = acc.real();
        }
        return out;
    }
    SampledSignal out{grid, std::vector<double>(grid.count)};
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.count); ++i)
        out.values[static_cast<std::size_t>(i)] =
            carrier_value(spec, grid.time_at(static_cast<std::size_t>(i)));
    return out;
}

namespace {

ParamScalar ps_from_double(double x) { return ParamScalar(rat_from_double(x)); }

// initial values of a trigonometric sum: z^(i)(0) = sum A w^i sin(phi + i pi/2)
double trig_initial(const std::vector<Tone>& tones, unsigned i) {
    double acc = 0.0;
    for (const auto& tone : tones)
        acc += tone.amplitude * std::pow(tone.omega, static_cast<double>(i)) *
               std::sin(tone.phase + i * M_PI / 2.0);
    return acc;
}

}  // namespace

TimeOde carrier_ode(const CarrierSpec& spec) {
    switch (spec.kind) {
        case CarrierSpec::Kind::TrigSum: {
            if (spec.tones.empty()) throw std::invalid_argument("empty trig sum");
            // product of (D^2 + w^2) as a polynomial in D^2
            std::vector<double> poly = {1.0};
            for (const auto& tone : spec.tones) {
                std::vector<double> next(poly.size() + 1, 0.0);
                double w2 = tone.omega * tone.omega;
                for (size_t k = 0; k < poly.size(); ++k) {
                    next[k + 1] += poly[k];
                    next[k] += poly[k] * w2;
                }
                poly = std::move(next);
            }
            std::vector<OdeTerm> terms;
            for (size_t k = 0; k < poly.size(); ++k)
                if (poly[k] != 0.0) terms.push_back({ps_from_double(poly[k]), 0, 2 * static_cast<unsigned>(k)});
            unsigned order = 2 * static_cast<unsigned>(spec.tones.size());
            std::vector<ParamScalar> iv(order);
            for (unsigned i = 0; i < order; ++i) iv[i] = ps_from_double(trig_initial(spec.tones, i));
            return TimeOde(std::move(terms), std::move(iv));
        }
        case CarrierSpec::Kind::Sinc: {
            // t z'' + 2 z' + w^2 t z = 0, z(0) = w, z'(0) = 0
            ParamScalar w2 = ps_from_double(spec.omega * spec.omega);
            std::vector<OdeTerm> terms = {
                {ParamScalar(1), 1, 2}, {ParamScalar(2), 0, 1}, {w2, 1, 0}};
            return TimeOde(std::move(terms), {ps_from_double(spec.omega), ParamScalar(0)});
        }
        case CarrierSpec::Kind::RaisedCosine: {
            // (1+t^2) z'' + 4 t z' + (2 + w^2 (1+t^2)) z = 0, z(0) = 1, z'(0) = 0
            ParamScalar w2 = ps_from_double(spec.omega * spec.omega);
            std::vector<OdeTerm> terms = {{ParamScalar(1), 0, 2}, {ParamScalar(1), 2, 2},
                                          {ParamScalar(4), 1, 1}, {ParamScalar(2) + w2, 0, 0},
                                          {w2, 2, 0}};
            return TimeOde(std::move(terms), {ParamScalar(1), ParamScalar(0)});
        }
        case CarrierSpec::Kind::RationalSpectrum:
            throw std::invalid_argument("rational-spectrum carriers are defined by their transform");
    }
    throw std::logic_error("unreachable");
}

}  // namespace opcalc
