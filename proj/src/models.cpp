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

#include "opcalc/models.hpp"

#include <cmath>
#include <stdexcept>

namespace opcalc {

namespace {

ParamScalar ps(double x) { return ParamScalar(rat_from_double(x)); }

void finalize(EstimatorModel& m) {
    m.system = build_estimator_system(m.relation, m.thetas);
    m.plan = compile_plan(normalize_strictly_proper(m.system), m.thetas);
}

}  // namespace

EstimatorModel make_amplitude_model(double omega, double amplitude_truth) {
    if (omega <= 0.0) throw std::invalid_argument("carrier frequency must be positive");
    EstimatorModel m;
    m.id = "amplitude";
    SymId theta = SymbolTable::intern("theta");

    // z'' + w^2 z = 0 with z(0) = 0, z'(0) = theta w
    TimeOde ode({{ParamScalar(1), 0, 2}, {ps(omega * omega), 0, 0}},
                {ParamScalar(0), ParamScalar::symbol(theta) * ps(omega)});
    m.relation = to_operational(ode);
    m.thetas = {theta};
    m.truth = {amplitude_truth};
    m.carrier.kind = CarrierSpec::Kind::TrigSum;
    m.carrier.tones = {{amplitude_truth, omega, 0.0}};
    m.equation = relation_as_equation(m.relation);
    m.module = module_from_equation(m.equation);
    finalize(m);
    return m;
}

EstimatorModel make_phase_model(double omega, double amplitude, double phase) {
    if (omega <= 0.0) throw std::invalid_argument("carrier frequency must be positive");
    EstimatorModel m;
    m.id = "phase";
    SymId a = SymbolTable::intern("a");
    SymId b = SymbolTable::intern("b");

    // z(0) = b, z'(0) = a w
    TimeOde ode({{ParamScalar(1), 0, 2}, {ps(omega * omega), 0, 0}},
                {ParamScalar::symbol(b), ParamScalar::symbol(a) * ps(omega)});
    m.relation = to_operational(ode);
    m.thetas = {a, b};
    m.truth = {amplitude * std::cos(phase), amplitude * std::sin(phase)};
    m.carrier.kind = CarrierSpec::Kind::TrigSum;
    m.carrier.tones = {{amplitude, omega, phase}};
    m.equation = relation_as_equation(m.relation);
    m.module = module_from_equation(m.equation);
    finalize(m);
    return m;
}

EstimatorModel make_frequency_model(double omega, double amplitude, double phase) {
    if (omega <= 0.0) throw std::invalid_argument("carrier frequency must be positive");
    EstimatorModel m;
    m.id = "frequency";
    SymId theta = SymbolTable::intern("theta");
    SymId x0 = SymbolTable::intern("x0");
    SymId x1 = SymbolTable::intern("x1");

    // z'' + theta z = 0 with unknown initial conditions
    TimeOde ode({{ParamScalar(1), 0, 2}, {ParamScalar::symbol(theta), 0, 0}},
                {ParamScalar::symbol(x0), ParamScalar::symbol(x1)});
    m.relation = to_operational(ode);
    m.thetas = {theta};
    m.truth = {omega * omega};
    m.carrier.kind = CarrierSpec::Kind::TrigSum;
    m.carrier.tones = {{amplitude, omega, phase}};

    // identifiability runs on the homogenized relation; the module comes
    // from the rational transform with the initial conditions symbolic
    OperationalRelation hom;
    hom.lhs = homogenize(m.relation);
    hom.rhs = SPoly();
    m.equation = relation_as_equation(hom);
    std::vector<ParamScalar> num_c = {ParamScalar::symbol(x1), ParamScalar::symbol(x0)};
    std::vector<ParamScalar> den_c = {ParamScalar::symbol(theta), ParamScalar(0), ParamScalar(1)};
    RatFunc xhat(SPoly(std::move(num_c)), SPoly(std::move(den_c)));
    m.module = module_for_rational(xhat);
    finalize(m);
    return m;
}

EstimatorModel make_rational_model(const std::vector<double>& num,
                                   const std::vector<double>& den) {
    EstimatorModel m;
    m.id = "rational";
    m.carrier.kind = CarrierSpec::Kind::RationalSpectrum;
    m.carrier.num_coeffs = num;
    m.carrier.den_coeffs = den;

    // exact transform, reduced to lowest terms
    auto spoly_of = [](const std::vector<double>& asc) {
        std::vector<ParamScalar> c;
        for (double v : asc) c.push_back(ps(v));
        return SPoly(std::move(c));
    };
    RatFunc xhat(spoly_of(num), spoly_of(den));
    if (xhat.is_zero()) throw std::invalid_argument("rational model: zero transform");
    m.equation = minimal_equation(xhat);
    m.module = module_from_equation(m.equation);

    // symbolic relation: (s^d + sum q_i s^i) x = sum p_i s^i with the
    // designated leading denominator coefficient pinned to 1
    const SPoly& qq = m.equation.q[0];
    const SPoly& pp = m.equation.p;
    int d = qq.degree();
    if (d < 1) throw std::invalid_argument("rational model: constant denominator");
    if (static_cast<size_t>(d) + static_cast<size_t>(pp.degree()) + 1 > 4)
        throw std::invalid_argument("rational model: more than 4 free coefficients");

    std::vector<ParamScalar> qs(static_cast<size_t>(d) + 1), psym;
    qs[static_cast<size_t>(d)] = ParamScalar(1);
    for (int i = 0; i < d; ++i) {
        SymId sym = SymbolTable::intern("q" + std::to_string(i));
        m.thetas.push_back(sym);
        qs[static_cast<size_t>(i)] = ParamScalar::symbol(sym);
        m.truth.push_back(rat_to_double(*qq.coeff(static_cast<unsigned>(i)).to_rat()));
    }
    for (int i = 0; i <= pp.degree(); ++i) {
        SymId sym = SymbolTable::intern("p" + std::to_string(i));
        m.thetas.push_back(sym);
        psym.push_back(ParamScalar::symbol(sym));
        m.truth.push_back(rat_to_double(*pp.coeff(static_cast<unsigned>(i)).to_rat()));
    }
    m.relation.lhs = DiffOp(RatFunc(SPoly(std::move(qs)), SPoly(ParamScalar(1))));
    m.relation.rhs = SPoly(std::move(psym));
    std::set<SymId> syms;
    m.relation.lhs.collect_symbols(syms);
    m.relation.rhs.collect_symbols(syms);
    m.relation.params.assign(syms.begin(), syms.end());
    finalize(m);
    return m;
}

DiffOp carrier_annihilator(const CarrierSpec& spec) {
    return homogenize(to_operational(carrier_ode(spec)));
}

}  // namespace opcalc
