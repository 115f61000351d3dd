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
#include <cstdio>
#include <filesystem>
#include <random>

#include "opcalc/models.hpp"
#include "opcalc/runtime.hpp"

using namespace opcalc;

namespace {

SampledSignal sampled(double width, std::size_t nbar, double (*f)(double)) {
    Grid g = Grid::over(width, nbar);
    SampledSignal out{g, std::vector<double>(g.count)};
    for (std::size_t i = 0; i < g.count; ++i) out.values[i] = f(g.time_at(i));
    return out;
}

}  // namespace

TEST_CASE("quadrature on flat and polynomial integrands") {
    SampledSignal ones = sampled(1.0, 100, [](double) { return 1.0; });
    IntegralAtom plain{BigRat(1), 1, 0, IntegralAtom::Source::Measured};
    CHECK(atom_value(plain, ones, 100, QuadRule::Simpson) == doctest::Approx(1.0).epsilon(1e-10));

    // int_0^1 (1-tau)(-tau) tau dtau = -1/12, cubic: Simpson is exact
    SampledSignal ramp = sampled(1.0, 100, [](double t) { return t; });
    IntegralAtom a{BigRat(1), 2, 1, IntegralAtom::Source::Measured};
    CHECK(atom_value(a, ramp, 100, QuadRule::Simpson) ==
          doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("simpson error falls like the fourth power of the step") {
    // int_0^1 (1-tau) sin(3 tau) dtau = 1/3 - sin(3)/9
    const double exact = 1.0 / 3.0 - std::sin(3.0) / 9.0;
    IntegralAtom a{BigRat(1), 2, 0, IntegralAtom::Source::Measured};
    double err_prev = 0.0;
    std::vector<double> errs;
    for (std::size_t nbar : {20, 40, 80}) {
        SampledSignal x = sampled(1.0, nbar, [](double t) { return std::sin(3.0 * t); });
        errs.push_back(std::abs(atom_value(a, x, nbar, QuadRule::Simpson) - exact));
    }
    (void)err_prev;
    double r1 = errs[0] / errs[1];
    double r2 = errs[1] / errs[2];
    CHECK(r1 > 16.0 * 0.7);
    CHECK(r1 < 16.0 * 1.3);
    CHECK(r2 > 16.0 * 0.7);
    CHECK(r2 < 16.0 * 1.3);

    // trapezoid fallback on odd segment counts stays second order
    SampledSignal odd = sampled(1.0, 99, [](double t) { return std::sin(3.0 * t); });
    double e_odd = std::abs(atom_value(a, odd, 99, QuadRule::Simpson) - exact);
    CHECK(e_odd < 1e-3);
    CHECK(e_odd > 1e-7);  // clearly not fourth order
}

TEST_CASE("off grid windows and the origin guard") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    SampledSignal x = sampled(1.0, 100, [](double t) { return 1.5 * std::sin(2.0 * t); });
    CHECK_THROWS_AS(evaluate_plan(am.plan, x, 0.505), std::invalid_argument);

    EstimateResult at0 = evaluate_plan(am.plan, x, 0.0);
    CHECK_FALSE(at0.guard_ok);
    CHECK(at0.estimates.empty());
    CHECK(at0.diagnostic == "divisor too small at this window");
}

TEST_CASE("noiseless recovery for the three built-in estimators") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    SampledSignal xa = carrier_sample(am.carrier, Grid::over(1.0, 10000));
    CHECK(evaluate_plan(am.plan, xa, 1.0).estimates[0] ==
          doctest::Approx(1.5).epsilon(1e-6));

    EstimatorModel fm = make_frequency_model(3.0, 1.0, 0.7);
    SampledSignal xf = carrier_sample(fm.carrier, Grid::over(1.0, 10000));
    CHECK(evaluate_plan(fm.plan, xf, 1.0).estimates[0] ==
          doctest::Approx(9.0).epsilon(2e-6));

    EstimatorModel pm = make_phase_model(2.0, 1.5, 0.7);
    SampledSignal xp = carrier_sample(pm.carrier, Grid::over(1.0, 10000));
    EstimateResult pr = evaluate_plan(pm.plan, xp, 1.0);
    CHECK(pr.estimates[0] == doctest::Approx(1.5 * std::cos(0.7)).epsilon(1e-6));
    CHECK(pr.estimates[1] == doctest::Approx(1.5 * std::sin(0.7)).epsilon(1e-6));
}

TEST_CASE("demodulation of clean streams") {
    EstimatorModel am = make_amplitude_model(2.0, 1.0);
    const std::size_t spp = 201;  // 200 segments per symbol window
    const double dt = 1.0 / 200.0;

    auto make_stream = [&](const std::vector<double>& symbols) {
        SampledSignal s{Grid{dt, spp * symbols.size()}, {}};
        s.values.resize(spp * symbols.size());
        for (std::size_t w = 0; w < symbols.size(); ++w)
            for (std::size_t i = 0; i < spp; ++i)
                s.values[w * spp + i] = symbols[w] * std::sin(2.0 * (dt * i));
        return s;
    };

    SUBCASE("antipodal symbols") {
        SampledSignal stream = make_stream({1.0, -1.0});
        DemodResult r = sliding_demodulate(am.plan, stream, spp, {1.0, -1.0});
        CHECK(r.symbols == 2);
        CHECK(r.erasures == 0);
        CHECK(r.decisions == std::vector<int>{0, 1});
        CHECK(r.decided + r.erasures == r.symbols);
    }

    SUBCASE("amplitude shift keying") {
        SampledSignal stream = make_stream({0.5, 1.5, 1.0, 0.5});
        DemodResult r = sliding_demodulate(am.plan, stream, spp, {0.5, 1.0, 1.5});
        CHECK(r.erasures == 0);
        CHECK(r.decisions == std::vector<int>{0, 2, 1, 0});
    }

    SUBCASE("all-zero stream ties break to the first constellation point") {
        SampledSignal stream = make_stream({0.0, 0.0});
        DemodResult r = sliding_demodulate(am.plan, stream, spp, {1.0, -1.0});
        CHECK(r.erasures == 0);
        CHECK(r.decisions == std::vector<int>{0, 0});
        CHECK(r.low_confidence == std::vector<bool>{true, true});
        CHECK(r.estimates[0] == doctest::Approx(0.0));
    }

    SUBCASE("signal-dependent divisor erases instead of deciding") {
        EstimatorModel fm = make_frequency_model(2.0, 1.0, 0.0);
        SampledSignal stream = make_stream({0.0, 0.0});
        DemodResult r = sliding_demodulate(fm.plan, stream, spp, {1.0, -1.0});
        CHECK(r.erasures == 2);
        CHECK(r.decided == 0);
        CHECK(r.decisions == std::vector<int>{-1, -1});
    }
}

TEST_CASE("signal csv round trips at full precision") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SampledSignal sig{Grid{1.0 / 64.0, 50}, {}};
    for (std::size_t i = 0; i < 50; ++i) sig.values.push_back(std::cbrt(d(rng)));

    std::string path = (std::filesystem::temp_directory_path() / "opcalc_rt.csv").string();
    write_signal_csv(path, sig, {"config: {}", "seed: 7"});
    SampledSignal back = read_signal_csv(path);
    REQUIRE(back.values.size() == sig.values.size());
    CHECK(back.grid.dt == doctest::Approx(sig.grid.dt).epsilon(1e-15));
    for (std::size_t i = 0; i < 50; ++i) CHECK(back.values[i] == sig.values[i]);
    std::filesystem::remove(path);
}

TEST_CASE("snr definition") {
    SampledSignal a = sampled(1.0, 1000, [](double t) { return std::sin(5.0 * t); });
    CHECK(snr_db(a, a) == doctest::Approx(0.0));

    SampledSignal b{a.grid, a.values};
    for (auto& v : b.values) v *= 10.0;
    CHECK(snr_db(a, b) == doctest::Approx(-20.0));

    SampledSignal z = sampled(1.0, 1000, [](double) { return 0.0; });
    CHECK(std::isinf(snr_db(a, z)));
    CHECK(snr_db(a, z) > 0);
    CHECK(std::isinf(snr_db(z, a)));
    CHECK(snr_db(z, a) < 0);
}
