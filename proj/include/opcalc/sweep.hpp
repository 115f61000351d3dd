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

#ifndef OPCALC_SWEEP_HPP
#define OPCALC_SWEEP_HPP

#include "opcalc/carrier.hpp"
#include "opcalc/noise.hpp"
#include "opcalc/runtime.hpp"

namespace opcalc {

/// One sweep cell: the swept value with its resolved grid and noise.
struct SweepCell {
    double swept = 0.0;
    std::uint64_t nbar = 0;
    NoiseSpec noise;
};

struct SweepConfig {
    EstimatorPlan plan;
    std::vector<double> truth;
    CarrierSpec carrier;
    double window = 1.0;
    QuadRule rule = QuadRule::Simpson;
    double eps_div = 1e-8;
    int param_index = 0;  // error is measured on this parameter

    std::vector<SweepCell> cells;
    unsigned trials = 1;
    std::uint64_t seed = 1;

    enum class Metric { MeanErr, StdErr } fit_metric = Metric::MeanErr;
    bool parallel = true;
};

struct SweepRow {
    double swept = 0.0;
    double noise_amp = 0.0;
    double nbar = 0.0;
    double mean_err = 0.0;
    double std_err = 0.0;
    double mean_snr_db = 0.0;
    std::uint64_t erasures = 0;
    std::uint64_t trials_run = 0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double ci95 = 0.0;
    unsigned points = 0;
    bool valid = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    SlopeFit fit;
    bool degenerate = false;  // a cell lost every trial to the guard
    std::uint64_t seed = 0;
};

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

SweepReport run_sweep(const SweepConfig& cfg);

/// Analytic per-parameter error standard deviation for additive white
/// noise of amplitude `noise_amp`, from the perturbation image of the
/// plan evaluated on the clean signal (exact discrete-sum variance).
std::vector<double> predict_error_std(const EstimatorPlan& plan,
                                      const std::vector<double>& truth,
                                      const SampledSignal& clean, double t,
                                      QuadRule rule, double noise_amp);

// ------------------------------------------------------------------ SER

struct SerConfig {
    EstimatorPlan plan;
    CarrierSpec carrier;          // unit-amplitude carrier; symbols scale it
    double window = 1.0;          // symbol period
    QuadRule rule = QuadRule::Simpson;
    double eps_div = 1e-8;
    int param_index = 0;

    std::vector<double> constellation = {1.0, -1.0};
    std::size_t symbols = 10000;
    double snr_target_db = -20.0;
    std::vector<std::uint64_t> nbar_values;
    NoiseSpec::Dist dist = NoiseSpec::Dist::Gaussian;
    std::uint64_t seed = 1;
    bool parallel = true;
};

struct SerRow {
    double nbar = 0.0;
    double noise_amp = 0.0;
    double snr_db = 0.0;
    double ser_algebraic = 0.0;
    double ser_correlation = 0.0;
    std::uint64_t erasures = 0;
};

struct SerReport {
    std::vector<SerRow> rows;
    double variance_constant = 0.0;   // predicted sigma * sqrt(nbar)
    double predicted_nbar_for_1pct = 0.0;
    bool degenerate = false;
    std::uint64_t seed = 0;
};

SerReport run_ser(const SerConfig& cfg);

}  // namespace opcalc

#endif
