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

SPoly P(std::initializer_list<long> asc) {
    std::vector<ParamScalar> c;
    for (long v : asc) c.push_back(ParamScalar(v));
    return SPoly(std::move(c));
}

}  // namespace

TEST_CASE("transform of the harmonic oscillator") {
    ParamScalar w2 = ParamScalar::symbol("w") * ParamScalar::symbol("w");
    ParamScalar x0 = ParamScalar::symbol("x0"), x1 = ParamScalar::symbol("x1");
    TimeOde ode({{ParamScalar(1), 0, 2}, {w2, 0, 0}}, {x0, x1});
    OperationalRelation rel = to_operational(ode);

    CHECK(rel.lhs.order() == 0);
    SPoly expect_lhs = SPoly::s_power(2) + SPoly(w2);
    CHECK(rel.lhs.coeff(0) == RatFunc(expect_lhs, SPoly(ParamScalar(1))));
    std::vector<ParamScalar> rhs_c = {x1, x0};
    CHECK(rel.rhs == SPoly(rhs_c));
}

TEST_CASE("transform of the cardinal sine equation") {
    // t z'' + 2 z' + w^2 t z = 0, z(0) = w:  (s^2 + w^2) x' = -w
    ParamScalar w = ParamScalar::symbol("w");
    TimeOde ode({{ParamScalar(1), 1, 2}, {ParamScalar(2), 0, 1}, {w * w, 1, 0}},
                {w, ParamScalar(0)});
    MinimalEquation me = relation_as_equation(to_operational(ode));
    CHECK(me.order() == 1);
    CHECK(me.q[1] == SPoly::s_power(2) + SPoly(w * w));
    CHECK(me.q[0].is_zero());
    CHECK(me.p == SPoly(-w));

    // cross-check against the closed form arctan(w/s)
    RatFunc xp = me.q[1].is_zero() ? RatFunc() : RatFunc(me.p, me.q[1]);
    RatFunc expect(SPoly(-w), SPoly::s_power(2) + SPoly(w * w));
    CHECK(xp == expect);
}

TEST_CASE("transform linearity over term lists") {
    ParamScalar alpha(3), beta(-2);
    ParamScalar x0 = ParamScalar::symbol("x0"), x1 = ParamScalar::symbol("x1");
    TimeOde a({{ParamScalar(1), 0, 2}, {ParamScalar(5), 0, 0}}, {x0, x1});
    TimeOde b({{ParamScalar(2), 1, 1}, {ParamScalar(1), 0, 0}}, {x0, x1});
    OperationalRelation combined = to_operational(a.scaled(alpha) + b.scaled(beta));
    OperationalRelation ra = to_operational(a), rb = to_operational(b);
    CHECK(combined.lhs ==
          ra.lhs.scaled(RatFunc(alpha)) + rb.lhs.scaled(RatFunc(beta)));
    CHECK(combined.rhs == ra.rhs.scaled(alpha) + rb.rhs.scaled(beta));
}

TEST_CASE("homogenize kills the forcing polynomial") {
    ParamScalar w2 = ParamScalar::symbol("w") * ParamScalar::symbol("w");
    ParamScalar x0 = ParamScalar::symbol("x0"), x1 = ParamScalar::symbol("x1");
    TimeOde ode({{ParamScalar(1), 0, 2}, {w2, 0, 0}}, {x0, x1});
    OperationalRelation rel = to_operational(ode);

    DiffOp ann = homogenize(rel);
    // (s^2+w^2) D^2 + 4 s D + 2
    SPoly q = SPoly::s_power(2) + SPoly(w2);
    std::vector<RatFunc> c(3);
    c[0] = RatFunc(2);
    c[1] = RatFunc(SPoly::s_power(1), SPoly(ParamScalar(1))) * RatFunc(4);
    c[2] = RatFunc(q, SPoly(ParamScalar(1)));
    CHECK(ann == DiffOp(std::move(c)));

    // zero forcing side stays untouched
    OperationalRelation hom{ann, SPoly(), {}};
    CHECK(homogenize(hom) == ann);
}

TEST_CASE("homogenized sinc relation") {
    ParamScalar w = ParamScalar::symbol("w");
    TimeOde ode({{ParamScalar(1), 1, 2}, {ParamScalar(2), 0, 1}, {w * w, 1, 0}},
                {w, ParamScalar(0)});
    OperationalRelation rel = to_operational(ode);
    uint64_t dummy = 0;
    (void)dummy;
    // one derivative: (s^2+w^2) D^2 + 2 s D annihilates the transform
    MinimalEquation me = relation_as_equation(rel);
    OperationalRelation eqrel;
    eqrel.lhs = DiffOp(std::vector<RatFunc>{
        RatFunc(), RatFunc(me.q[1], SPoly(ParamScalar(1)))});
    eqrel.rhs = me.p;
    DiffOp ann = homogenize(eqrel);
    std::vector<RatFunc> c(3);
    c[1] = RatFunc(SPoly::s_power(1), SPoly(ParamScalar(1))) * RatFunc(2);
    c[2] = RatFunc(SPoly::s_power(2) + SPoly(w * w), SPoly(ParamScalar(1)));
    CHECK(ann == DiffOp(std::move(c)));
}

TEST_CASE("minimal equations of rational transforms") {
    MinimalEquation a = minimal_equation(RatFunc(P({1}), P({0, 1})));  // 1/s
    CHECK(a.order() == 0);
    CHECK(a.q[0] == P({0, 1}));
    CHECK(a.p == P({1}));

    MinimalEquation b = minimal_equation(RatFunc(P({2, 3}), P({5, 1, 1})));
    CHECK(b.q[0] == P({5, 1, 1}));
    CHECK(b.p == P({2, 3}));

    // common factor removed first
    MinimalEquation c = minimal_equation(RatFunc(P({-1, 0, 1}), P({-1, 1}) * P({4, 0, 1})));
    CHECK(c.q[0] == P({4, 0, 1}));
    CHECK(c.p == P({1, 1}));

    CHECK_THROWS_AS(minimal_equation(RatFunc()), std::invalid_argument);
}

TEST_CASE("carrier point values") {
    CarrierSpec trig;
    trig.kind = CarrierSpec::Kind::TrigSum;
    trig.tones = {{1.0, 2.0, 0.0}};
    CHECK(carrier_value(trig, 0.0) == doctest::Approx(0.0));
    CHECK(carrier_value(trig, M_PI / 4.0) == doctest::Approx(1.0));
    CHECK(carrier_value(trig, M_PI / 2.0) == doctest::Approx(0.0).epsilon(1e-9));

    CarrierSpec sinc;
    sinc.kind = CarrierSpec::Kind::Sinc;
    sinc.omega = 3.0;
    CHECK(carrier_value(sinc, 0.0) == 3.0);
    CHECK(carrier_value(sinc, 0.5) == doctest::Approx(std::sin(1.5) / 0.5));

    CarrierSpec rc;
    rc.kind = CarrierSpec::Kind::RaisedCosine;
    rc.omega = 2.0;
    CHECK(carrier_value(rc, 0.0) == 1.0);
    CHECK(carrier_value(rc, 1.0) == doctest::Approx(std::cos(2.0) / 2.0));
}

TEST_CASE("rational-spectrum carrier matches its transform") {
    CarrierSpec spec;
    spec.kind = CarrierSpec::Kind::RationalSpectrum;
    spec.num_coeffs = {2.0, 3.0};
    spec.den_coeffs = {5.0, 1.0, 1.0};
    // initial value theorem: x(0+) = lim s -> inf of s * (3s+2)/(s^2+s+5)
    CHECK(carrier_value(spec, 0.0) == doctest::Approx(3.0).epsilon(1e-9));

    // the defining equation annihilates the sampled carrier
    OperationalRelation rel;
    rel.lhs = DiffOp(RatFunc(P({5, 1, 1}), P({1})));
    rel.rhs = P({2, 3});
    TimeFunctional f = compile_annihilator(homogenize(rel));
    SampledSignal sig = carrier_sample(spec, Grid::over(1.0, 2000));
    double val = functional_value(f, sig, 2000, QuadRule::Simpson);
    CHECK(std::abs(val) < 1e-8);
}

TEST_CASE("degenerate carrier requests are rejected") {
    CarrierSpec empty;
    empty.kind = CarrierSpec::Kind::TrigSum;
    CHECK_THROWS_AS(carrier_sample(empty, Grid::over(1.0, 10)), std::invalid_argument);

    CarrierSpec improper;
    improper.kind = CarrierSpec::Kind::RationalSpectrum;
    improper.num_coeffs = {0.0, 0.0, 1.0};
    improper.den_coeffs = {1.0, 0.0, 1.0};
    CHECK_THROWS_AS(carrier_sample(improper, Grid::over(1.0, 10)), std::invalid_argument);

    CarrierSpec repeated;
    repeated.kind = CarrierSpec::Kind::RationalSpectrum;
    repeated.num_coeffs = {1.0};
    repeated.den_coeffs = {1.0, 2.0, 1.0};  // (s+1)^2
    CHECK_THROWS_AS(carrier_sample(repeated, Grid::over(1.0, 10)), std::domain_error);
}

TEST_CASE("compiled annihilators vanish on their carriers") {
    auto check_annihilation = [](const CarrierSpec& spec, double tol) {
        DiffOp ann = carrier_annihilator(spec);
        TimeFunctional f = compile_annihilator(ann);
        SampledSignal sig = carrier_sample(spec, Grid::over(1.0, 4000));
        double val = functional_value(f, sig, 4000, QuadRule::Simpson);
        double scale = 0.0;
        for (const auto& a : f.atoms) scale += std::abs(a.c_num());
        CHECK(std::abs(val) < tol * std::max(1.0, scale));
    };

    CarrierSpec one_tone;
    one_tone.kind = CarrierSpec::Kind::TrigSum;
    one_tone.tones = {{1.3, 2.7, 0.4}};
    check_annihilation(one_tone, 1e-9);

    CarrierSpec two_tone;
    two_tone.kind = CarrierSpec::Kind::TrigSum;
    two_tone.tones = {{1.0, 2.0, 0.3}, {0.5, 5.0, 1.1}};
    check_annihilation(two_tone, 1e-7);

    CarrierSpec sinc;
    sinc.kind = CarrierSpec::Kind::Sinc;
    sinc.omega = 3.0;
    check_annihilation(sinc, 1e-9);

    CarrierSpec rc;
    rc.kind = CarrierSpec::Kind::RaisedCosine;
    rc.omega = 2.0;
    check_annihilation(rc, 1e-9);
}
