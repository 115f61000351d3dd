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

#include <doctest.h>

#include <cmath>

#include "opcalc/models.hpp"
#include "opcalc/runtime.hpp"

using namespace opcalc;

namespace {

SampledSignal sample_fn(double width, std::size_t nbar, double (*f)(double)) {
    Grid g = Grid::over(width, nbar);
    SampledSignal out{g, std::vector<double>(g.count)};
    for (std::size_t i = 0; i < g.count; ++i) out.values[i] = f(g.time_at(i));
    return out;
}

double factorial_d(unsigned n) {
    double acc = 1.0;
    for (unsigned i = 2; i <= n; ++i) acc *= i;
    return acc;
}

}  // namespace

TEST_CASE("strictly proper normalization") {
    // a row that is already proper is left alone
    LinearSystemSpec sys;
    sys.thetas = {SymbolTable::intern("theta")};
    sys.A = {{OpExpr{{BigRat(1), -2, 0, true}}}};
    sys.B = {OpExpr{{BigRat(3), -1, 0, false}}};
    LinearSystemSpec out = normalize_strictly_proper(sys);
    CHECK(out.A[0][0] == sys.A[0][0]);
    CHECK(out.B[0] == sys.B[0]);

    // max power 2 -> every term shifted by s^-3
    sys.B = {OpExpr{{BigRat(1), 2, 0, false}, {BigRat(4), 0, 0, false}}};
    out = normalize_strictly_proper(sys);
    CHECK(out.B[0][0].s_pow == -3);
    CHECK(out.B[0][1].s_pow == -1);
    CHECK(out.A[0][0][0].s_pow == -5);
}

TEST_CASE("compile rejects improper rows") {
    LinearSystemSpec sys;
    sys.thetas = {SymbolTable::intern("theta")};
    sys.A = {{OpExpr{{BigRat(1), 1, 0, true}}}};
    sys.B = {OpExpr{}};
    sys.strictly_proper = true;  // lie about it
    CHECK_THROWS_AS(compile_plan(sys, sys.thetas), std::invalid_argument);
}

TEST_CASE("amplitude plan has the documented atoms") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    const EstimatorPlan& plan = am.plan;
    REQUIRE(plan.arity() == 1);

    // A: single unit atom w t^2/2
    REQUIRE(plan.A[0][0].atoms.size() == 1);
    const IntegralAtom& ua = plan.A[0][0].atoms[0];
    CHECK(ua.src == IntegralAtom::Source::Unit);
    CHECK(ua.k == 3);
    CHECK(ua.c == BigRat(2));

    // B: int x + w^2 * double integral of x
    REQUIRE(plan.B[0].atoms.size() == 2);
    CHECK(plan.B[0].atoms[0].k == 1);
    CHECK(plan.B[0].atoms[0].j == 0);
    CHECK(plan.B[0].atoms[0].c == BigRat(1));
    CHECK(plan.B[0].atoms[1].k == 3);
    CHECK(plan.B[0].atoms[1].c == BigRat(4));

    // evaluated divisor at t=1 is w t^2/2 = 1
    SampledSignal x = sample_fn(1.0, 1000, [](double t) { return 1.5 * std::sin(2.0 * t); });
    EstimateResult res = evaluate_plan(plan, x, 1.0);
    CHECK(res.guard_ok);
    CHECK(res.divisor == doctest::Approx(1.0));
    CHECK(res.estimates[0] == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("frequency plan carries four measured atoms") {
    EstimatorModel fm = make_frequency_model(3.0, 1.0, 0.7);
    std::size_t measured = 0;
    for (const auto& a : fm.plan.A[0][0].atoms)
        if (a.src == IntegralAtom::Source::Measured) ++measured;
    for (const auto& a : fm.plan.B[0].atoms)
        if (a.src == IntegralAtom::Source::Measured) ++measured;
    CHECK(measured == 4);
}

TEST_CASE("plan json round trip") {
    EstimatorModel pm = make_phase_model(2.0, 1.5, 0.7);
    std::string text = pm.plan.to_json();
    EstimatorPlan back = EstimatorPlan::from_json(text);
    CHECK(back.to_json() == text);
    CHECK(back.params == pm.plan.params);
    CHECK_FALSE(pm.plan.atom_table().empty());
}

TEST_CASE("unit atoms evaluate in closed form") {
    IntegralAtom a{BigRat(1), 3, 0, IntegralAtom::Source::Unit};
    SampledSignal x = sample_fn(1.0, 10, [](double) { return 0.0; });
    CHECK(atom_value(a, x, 10, QuadRule::Simpson) == 0.5);  // t^2/2 exactly
}

TEST_CASE("polynomial oracle: monomial signals against the beta closed form") {
    // int_0^t (t-tau)^{k-1}/(k-1)! (-tau)^j tau^m dtau
    //   = (-1)^j (j+m)! t^(k+j+m) / (k+j+m)!
    const double t = 1.0;
    Grid g = Grid::over(t, 2000);
    for (unsigned m = 0; m <= 6; ++m) {
        SampledSignal x{g, std::vector<double>(g.count)};
        for (std::size_t i = 0; i < g.count; ++i) x.values[i] = std::pow(g.time_at(i), m);
        for (unsigned k = 1; k <= 4; ++k) {
            for (unsigned j = 0; j <= 4; ++j) {
                IntegralAtom a{BigRat(1), k, j, IntegralAtom::Source::Measured};
                double got = atom_value(a, x, g.count - 1, QuadRule::Simpson);
                double expect = ((j % 2) ? -1.0 : 1.0) * factorial_d(j + m) /
                                factorial_d(k + j + m);
                CHECK(got == doctest::Approx(expect).epsilon(1e-7));
                CHECK(std::abs(got - expect) < 1e-9);
            }
        }
    }
}

TEST_CASE("plan evaluation is linear in the signal") {
    EstimatorModel am = make_amplitude_model(2.0, 1.0);
    SampledSignal x = sample_fn(1.0, 500, [](double t) { return std::sin(2.0 * t); });
    SampledSignal y = sample_fn(1.0, 500, [](double t) { return t * t; });
    SampledSignal combo{x.grid, std::vector<double>(x.values.size())};
    for (std::size_t i = 0; i < x.values.size(); ++i)
        combo.values[i] = 2.5 * x.values[i] - 0.5 * y.values[i];
    for (const auto& f : {am.plan.B[0]}) {
        double vx = functional_value(f, x, 500, QuadRule::Simpson);
        double vy = functional_value(f, y, 500, QuadRule::Simpson);
        double vc = functional_value(f, combo, 500, QuadRule::Simpson);
        CHECK(vc == doctest::Approx(2.5 * vx - 0.5 * vy).epsilon(1e-12));
    }
}

TEST_CASE("scale equivariance of compiled estimates") {
    // linear parameter scales with the signal
    EstimatorModel am = make_amplitude_model(2.0, 1.0);
    SampledSignal x = sample_fn(1.0, 2000, [](double t) { return std::sin(2.0 * t); });
    SampledSignal x3{x.grid, x.values};
    for (auto& v : x3.values) v *= 3.0;
    double e1 = evaluate_plan(am.plan, x, 1.0).estimates[0];
    double e3 = evaluate_plan(am.plan, x3, 1.0).estimates[0];
    CHECK(e3 == doctest::Approx(3.0 * e1).epsilon(1e-9));

    // ratio-form parameter is scale invariant
    EstimatorModel fm = make_frequency_model(3.0, 1.0, 0.7);
    SampledSignal y = sample_fn(1.0, 2000, [](double t) { return std::sin(3.0 * t + 0.7); });
    SampledSignal y3{y.grid, y.values};
    for (auto& v : y3.values) v *= 3.0;
    double f1 = evaluate_plan(fm.plan, y, 1.0).estimates[0];
    double f3 = evaluate_plan(fm.plan, y3, 1.0).estimates[0];
    CHECK(f3 == doctest::Approx(f1).epsilon(1e-9));
}

TEST_CASE("perturbation image mirrors the plan and vanishes on silence") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    NoiseImage img = perturbation_image(am.plan);
    REQUIRE(img.b_part.size() == 1);
    CHECK(img.b_part[0].atoms.size() == am.plan.B[0].atoms.size());

    SampledSignal zero = sample_fn(1.0, 100, [](double) { return 0.0; });
    double v = functional_value(img.b_part[0], zero, 100, QuadRule::Simpson);
    CHECK(v == 0.0);
}

TEST_CASE("rational model compiles into a solvable 4x4 plan") {
    EstimatorModel rm = make_rational_model({2.0, 3.0}, {5.0, 1.0, 1.0});
    REQUIRE(rm.plan.arity() == 4);
    CHECK(rm.truth == std::vector<double>{5.0, 1.0, 2.0, 3.0});  // q0 q1 p0 p1

    SampledSignal x = carrier_sample(rm.carrier, Grid::over(1.0, 20000));
    EstimateResult res = evaluate_plan(rm.plan, x, 1.0);
    REQUIRE(res.guard_ok);
    for (unsigned i = 0; i < 4; ++i)
        CHECK(res.estimates[i] == doctest::Approx(rm.truth[i]).epsilon(2e-4));
}
