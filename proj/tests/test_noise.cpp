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
#include "opcalc/sweep.hpp"

using namespace opcalc;

namespace {

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
    double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("white noise moments") {
    Grid g = Grid::over(1.0, 100000);
    for (auto dist : {NoiseSpec::Dist::Gaussian, NoiseSpec::Dist::Rademacher,
                      NoiseSpec::Dist::Uniform}) {
        NoiseSpec spec;
        spec.kind = NoiseSpec::Kind::White;
        spec.amplitude = 2.0;
        spec.dist = dist;
        SampledSignal w = gen_noise(spec, g, {12345, 0, 0});
        CHECK(std::abs(sample_mean(w.values)) < 0.05);
        CHECK(sample_var(w.values) == doctest::Approx(4.0).epsilon(0.05));
    }

    NoiseSpec zero;
    zero.kind = NoiseSpec::Kind::White;
    zero.amplitude = 0.0;
    SampledSignal w0 = gen_noise(zero, Grid::over(1.0, 100), {1, 0, 0});
    for (double v : w0.values) CHECK(v == 0.0);
}

TEST_CASE("sinusoid perturbation is deterministic") {
    NoiseSpec spec;
    spec.kind = NoiseSpec::Kind::SinusoidSum;
    spec.tones = {{1.0, 1000.0, 0.0, false}};
    Grid g = Grid::over(1.0, 100);
    SampledSignal w1 = gen_noise(spec, g, {1, 0, 0});
    SampledSignal w2 = gen_noise(spec, g, {99, 7, 3});  // seed ignored
    CHECK(w1.values == w2.values);
    CHECK(w1.values[0] == 0.0);

    // random phases resolve deterministically from the key
    spec.tones[0].random_phase = true;
    SampledSignal r1 = gen_noise(spec, g, {5, 1, 2});
    SampledSignal r2 = gen_noise(spec, g, {5, 1, 2});
    SampledSignal r3 = gen_noise(spec, g, {5, 1, 3});
    CHECK(r1.values == r2.values);
    CHECK(r1.values != r3.values);
}

TEST_CASE("correlated noise hits the requested lag-1 correlation") {
    NoiseSpec spec;
    spec.kind = NoiseSpec::Kind::Correlated;
    spec.amplitude = 1.0;
    spec.rho = 0.1;
    Grid g = Grid::over(1.0, 200000);
    SampledSignal w = gen_noise(spec, g, {777, 0, 0});
    CHECK(sample_var(w.values) == doctest::Approx(1.0).epsilon(0.05));
    double m = sample_mean(w.values);
    double c1 = 0.0, c0 = 0.0;
    for (std::size_t i = 0; i + 1 < w.values.size(); ++i) {
        c1 += (w.values[i] - m) * (w.values[i + 1] - m);
        c0 += (w.values[i] - m) * (w.values[i] - m);
    }
    CHECK(c1 / c0 == doctest::Approx(0.1).epsilon(0.5));
    CHECK(std::abs(c1 / c0 - 0.1) < 0.02);
}

TEST_CASE("snr regression for the reference carrier") {
    // mean square of sin(2t) over [0,1] is 1/2 - sin(4)/8
    CarrierSpec c;
    c.kind = CarrierSpec::Kind::TrigSum;
    c.tones = {{1.0, 2.0, 0.0}};
    Grid g = Grid::over(1.0, 100000);
    SampledSignal x = carrier_sample(c, g);
    NoiseSpec spec;
    spec.kind = NoiseSpec::Kind::White;
    spec.amplitude = 1.0;
    SampledSignal w = gen_noise(spec, g, {2024, 0, 0});
    double expect = 10.0 * std::log10(0.5 - std::sin(4.0) / 8.0);
    CHECK(snr_db(x, w) == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("variance prediction matches monte carlo for every built-in estimator") {
    struct Case {
        EstimatorModel model;
        double noise_amp;
    };
    std::vector<Case> cases;
    cases.push_back({make_amplitude_model(2.0, 1.5), 0.5});
    cases.push_back({make_frequency_model(3.0, 1.0, 0.7), 0.02});
    cases.push_back({make_phase_model(2.0, 1.5, 0.7), 0.02});

    for (const auto& c : cases) {
        const std::size_t nbar = 2000;
        SampledSignal clean = carrier_sample(c.model.carrier, Grid::over(1.0, nbar));
        auto predicted = predict_error_std(c.model.plan, c.model.truth, clean, 1.0,
                                           QuadRule::Simpson, c.noise_amp);

        SweepConfig cfg;
        cfg.plan = c.model.plan;
        cfg.truth = c.model.truth;
        cfg.carrier = c.model.carrier;
        cfg.cells = {{static_cast<double>(nbar), nbar, NoiseSpec{}}};
        cfg.cells.push_back(cfg.cells[0]);  // fit needs 2 cells minimum
        for (auto& cell : cfg.cells) {
            cell.noise.kind = NoiseSpec::Kind::White;
            cell.noise.amplitude = c.noise_amp;
        }
        cfg.trials = 500;
        cfg.seed = 99;
        cfg.fit_metric = SweepConfig::Metric::StdErr;
        SweepReport rep = run_sweep(cfg);
        REQUIRE(rep.rows[0].trials_run == 500);
        CHECK(rep.rows[0].std_err ==
              doctest::Approx(predicted[0]).epsilon(0.15));
    }
}

TEST_CASE("sweep reports are bit-identical between serial and parallel runs") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    SweepConfig cfg;
    cfg.plan = am.plan;
    cfg.truth = am.truth;
    cfg.carrier = am.carrier;
    for (std::uint64_t nbar : {200, 400, 800}) {
        SweepCell cell;
        cell.swept = static_cast<double>(nbar);
        cell.nbar = nbar;
        cell.noise.kind = NoiseSpec::Kind::White;
        cell.noise.amplitude = 1.0;
        cfg.cells.push_back(cell);
    }
    cfg.trials = 25;
    cfg.seed = 31;
    cfg.fit_metric = SweepConfig::Metric::StdErr;

    cfg.parallel = true;
    SweepReport par = run_sweep(cfg);
    cfg.parallel = false;
    SweepReport ser = run_sweep(cfg);

    REQUIRE(par.rows.size() == ser.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        CHECK(par.rows[i].mean_err == ser.rows[i].mean_err);
        CHECK(par.rows[i].std_err == ser.rows[i].std_err);
        CHECK(par.rows[i].mean_snr_db == ser.rows[i].mean_snr_db);
        CHECK(par.rows[i].erasures == ser.rows[i].erasures);
    }
    CHECK(par.fit.slope == ser.fit.slope);
}

TEST_CASE("slope fitting recovers exact power laws") {
    std::vector<double> xs = {10, 100, 1000, 10000};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.0 * std::pow(x, -0.5));
    SlopeFit fit = fit_loglog(xs, ys);
    REQUIRE(fit.valid);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.points == 4);

    SlopeFit bad = fit_loglog({1, 2}, {1, 2});
    CHECK_FALSE(bad.valid);  // needs at least 3 cells
}

TEST_CASE("correlated perturbations keep the white-noise scaling") {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    SweepConfig cfg;
    cfg.plan = am.plan;
    cfg.truth = am.truth;
    cfg.carrier = am.carrier;
    for (std::uint64_t nbar : {500, 2000, 8000}) {
        SweepCell cell;
        cell.swept = static_cast<double>(nbar);
        cell.nbar = nbar;
        cell.noise.kind = NoiseSpec::Kind::Correlated;
        cell.noise.amplitude = 1.0;
        cell.noise.rho = 0.1;
        cfg.cells.push_back(cell);
    }
    cfg.trials = 100;
    cfg.seed = 11;
    cfg.fit_metric = SweepConfig::Metric::StdErr;
    SweepReport rep = run_sweep(cfg);
    REQUIRE(rep.fit.valid);
    CHECK(rep.fit.slope == doctest::Approx(-0.5).epsilon(0.3));  // +-0.15 absolute
    CHECK(std::abs(rep.fit.slope + 0.5) < 0.15);
}

TEST_CASE("ser experiment sanity on a clean channel") {
    EstimatorModel am = make_amplitude_model(6.0, 1.0);
    SerConfig cfg;
    cfg.plan = am.plan;
    cfg.carrier.kind = CarrierSpec::Kind::TrigSum;
    cfg.carrier.tones = {{1.0, 6.0, 0.0}};
    cfg.symbols = 200;
    cfg.snr_target_db = 100.0;  // essentially noiseless
    cfg.nbar_values = {100, 200};
    cfg.seed = 5;
    SerReport rep = run_ser(cfg);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        CHECK(row.ser_algebraic == 0.0);
        CHECK(row.ser_correlation == 0.0);
        CHECK(row.erasures == 0);
    }
}
