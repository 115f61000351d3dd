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

#include "opcalc/models.hpp"

using namespace opcalc;

namespace {

SPoly P(std::initializer_list<long> asc) {
    std::vector<ParamScalar> c;
    for (long v : asc) c.push_back(ParamScalar(v));
    return SPoly(std::move(c));
}

MinimalEquation corollary_instance() {
    return minimal_equation(RatFunc(P({2, 3}), P({5, 1, 1})));
}

}  // namespace

TEST_CASE("coefficient form counts") {
    // q0 = s^2 + w^2, p = w: two signal terms, one forcing term
    ParamScalar w = ParamScalar::symbol("w");
    MinimalEquation me;
    me.q = {SPoly::s_power(2) + SPoly(w * w)};
    me.p = SPoly(w);
    CoefficientForm cf = to_coefficient_form(me);
    CHECK(cf.n_sig() == 2);
    CHECK(cf.n_force() == 1);
    CHECK(cf.matrix_order() == 3);

    // homogenized frequency relation: four signal terms, no forcing
    EstimatorModel fm = make_frequency_model(3.0, 1.0, 0.7);
    CoefficientForm fcf = to_coefficient_form(fm.equation);
    CHECK(fcf.n_sig() == 4);
    CHECK(fcf.n_force() == 0);

    CoefficientForm ccf = to_coefficient_form(corollary_instance());
    CHECK(ccf.n_sig() == 3);
    CHECK(ccf.n_force() == 2);
}

TEST_CASE("matrix rows are derivatives of the column functions") {
    MinimalEquation me = corollary_instance();
    CoefficientForm cf = to_coefficient_form(me);
    ModulePtr mod = module_from_equation(me);
    MMatrix m(cf, mod);
    CHECK(m.order() == 5);

    // row 0, column of s * x equals s * x reduced
    RatFunc xhat(P({2, 3}), P({5, 1, 1}));
    RatFunc s1(SPoly::s_power(1), SPoly(ParamScalar(1)));
    CHECK(m.at(0, 1).unit_coord() == s1 * xhat);
    // row 1 of that column is x + s x'
    CHECK(m.at(1, 1).unit_coord() == xhat + s1 * xhat.derivative());
}

TEST_CASE("the coefficient matrix is singular and of rank N+M") {
    MinimalEquation me = corollary_instance();
    CoefficientForm cf = to_coefficient_form(me);
    ModulePtr mod = module_from_equation(me);
    MMatrix m(cf, mod);

    CHECK(det_symbolic(m).is_zero());

    RankReport rr = rank_of(m, {.seed = 42});
    CHECK(rr.rank == 4);  // N + M with N = 2, M = 2
    CHECK(rr.probabilistic);
}

TEST_CASE("dropping minimality lowers the rank") {
    MinimalEquation me = corollary_instance();
    MinimalEquation worse = premultiply(me, P({1, 1}));  // times (s+1)
    CoefficientForm cf = to_coefficient_form(worse);
    // still driven by the same signal
    ModulePtr mod = module_from_equation(me);
    MMatrix m(cf, mod);
    CHECK(cf.matrix_order() == 7);
    RankReport rr = rank_of(m, {.seed = 7});
    CHECK(rr.rank < cf.matrix_order() - 1);
    CHECK(det_symbolic(m).is_zero());
}

TEST_CASE("exact rank of trivial matrices") {
    std::vector<std::vector<BigRat>> zero(3, std::vector<BigRat>(3, BigRat(0)));
    CHECK(rank_exact(zero) == 0);
    std::vector<std::vector<BigRat>> eye(2, std::vector<BigRat>(2, BigRat(0)));
    eye[0][0] = 1;
    eye[1][1] = 1;
    CHECK(rank_exact(eye) == 2);
}

TEST_CASE("kernel recovery is projective") {
    MinimalEquation me = corollary_instance();
    CoefficientForm cf = to_coefficient_form(me);
    ModulePtr mod = module_from_equation(me);
    MMatrix m(cf, mod);

    // two independent specializations agree after normalization
    auto v1 = kernel_vector(m, 101, 0);
    auto v2 = kernel_vector(m, 202, 0);
    REQUIRE(v1.size() == 5);
    CHECK(v1 == v2);

    // and reproduce the equation coefficients up to the projective scale:
    // columns (x, s x, s^2 x, 1, s) against (5, 1, 1, -2, -3) scaled by 1/5
    CHECK(v1[0] == BigRat(1));
    CHECK(v1[1] == BigRat(1, 5));
    CHECK(v1[2] == BigRat(1, 5));
    CHECK(v1[3] == BigRat(-2, 5));
    CHECK(v1[4] == BigRat(-3, 5));
}

TEST_CASE("identifiability verdicts") {
    MinimalEquation me = corollary_instance();
    IdentReport yes =
        is_projectively_identifiable(to_coefficient_form(me), module_from_equation(me));
    CHECK(yes.identifiable);
    CHECK(yes.rank == yes.expected_rank);
    CHECK(yes.normalization_index >= 0);
    CHECK(yes.to_json().find("\"identifiable\": true") != std::string::npos);

    // amplitude model: theta strictly inside the coefficient set
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    IdentReport amr =
        is_projectively_identifiable(to_coefficient_form(am.equation), am.module);
    CHECK(amr.identifiable);

    MinimalEquation worse = premultiply(me, P({1, 1}));
    IdentReport no =
        is_projectively_identifiable(to_coefficient_form(worse), module_from_equation(me));
    CHECK_FALSE(no.identifiable);
    CHECK(no.rank < no.expected_rank);

    CoefficientForm degenerate;
    CHECK_THROWS_AS(is_projectively_identifiable(degenerate, module_from_equation(me)),
                    std::invalid_argument);
}

TEST_CASE("sinc transform is identifiable through its order-1 module") {
    ParamScalar w = ParamScalar::symbol("w");
    MinimalEquation me;
    me.q = {SPoly(), SPoly::s_power(2) + SPoly(w * w)};
    me.p = SPoly(-w);
    CoefficientForm cf = to_coefficient_form(me);
    CHECK(cf.n_sig() == 2);
    CHECK(cf.n_force() == 1);
    ModulePtr mod = module_from_equation(me);
    CHECK(mod->order() == 1);
    IdentReport rep = is_projectively_identifiable(cf, mod, {.seed = 5});
    CHECK(rep.identifiable);  // rank 2 = N + M
}

TEST_CASE("estimator system construction") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    CHECK(am.system.arity() == 1);
    // A entry: theta multiplies w * s^-3 applied to 1
    REQUIRE(am.system.A[0][0].size() == 1);
    CHECK(am.system.A[0][0][0].unit);
    CHECK(am.system.A[0][0][0].s_pow == -3);
    CHECK(am.system.A[0][0][0].c == BigRat(2));
    // B row: (s^-1 + w^2 s^-3) x
    REQUIRE(am.system.B[0].size() == 2);
    CHECK(am.system.B[0][0].s_pow == -3);
    CHECK(am.system.B[0][0].c == BigRat(4));
    CHECK(am.system.B[0][1].s_pow == -1);
    CHECK(am.system.B[0][1].c == BigRat(1));

    EstimatorModel pm = make_phase_model(2.0, 1.5, 0.7);
    CHECK(pm.system.arity() == 2);

    EstimatorModel fm = make_frequency_model(3.0, 1.0, 0.7);
    CHECK(fm.system.arity() == 1);
    // homogenized row normalized by s^-3: theta s^-3 x'' on the A side
    REQUIRE(fm.system.A[0][0].size() == 1);
    CHECK(fm.system.A[0][0][0].s_pow == -3);
    CHECK(fm.system.A[0][0][0].d_ord == 2);
    CHECK_FALSE(fm.system.A[0][0][0].unit);

    CHECK_THROWS_AS(build_estimator_system(am.relation, {}), std::invalid_argument);
}

TEST_CASE("estimated parameters must appear and stay affine") {
    // theta^2 breaks affinity
    SymId th = SymbolTable::intern("theta");
    ParamScalar t2 = ParamScalar::symbol(th) * ParamScalar::symbol(th);
    TimeOde ode({{ParamScalar(1), 0, 2}, {t2, 0, 0}},
                {ParamScalar(0), ParamScalar(1)});
    OperationalRelation rel = to_operational(ode);
    CHECK_THROWS_AS(build_estimator_system(rel, {th}), std::invalid_argument);
}
