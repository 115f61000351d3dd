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

// Wall-clock comparison of the serial reference path against the OpenMP
// path for the two batch kernels (sweep trials, demod windows).  The
// outputs must agree bit for bit; the timings are the point.

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "opcalc/models.hpp"
#include "opcalc/sweep.hpp"

using namespace opcalc;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SweepConfig bench_sweep_config(bool parallel) {
    EstimatorModel am = make_amplitude_model(2.0, 1.5);
    SweepConfig cfg;
    cfg.plan = am.plan;
    cfg.truth = am.truth;
    cfg.carrier = am.carrier;
    for (std::uint64_t nbar : {2000, 4000, 8000}) {
        SweepCell cell;
        cell.swept = static_cast<double>(nbar);
        cell.nbar = nbar;
        cell.noise.kind = NoiseSpec::Kind::White;
        cell.noise.amplitude = 1.0;
        cfg.cells.push_back(cell);
    }
    cfg.trials = 60;
    cfg.seed = 7;
    cfg.fit_metric = SweepConfig::Metric::StdErr;
    cfg.parallel = parallel;
    return cfg;
}

SampledSignal bench_stream(std::size_t symbols, std::size_t spp) {
    const double dt = 1.0 / static_cast<double>(spp - 1);
    SampledSignal s{Grid{dt, symbols * spp}, std::vector<double>(symbols * spp)};
    for (std::size_t w = 0; w < symbols; ++w) {
        double sym = (w % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < spp; ++i)
            s.values[w * spp + i] = sym * std::sin(2.0 * dt * static_cast<double>(i));
    }
    return s;
}

}  // namespace

int main() {
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::printf("opcalc benchmark (max threads: %d)\n\n", threads);

    {
        auto t0 = Clock::now();
        SweepReport serial = run_sweep(bench_sweep_config(false));
        double ts = seconds_since(t0);
        t0 = Clock::now();
        SweepReport parallel = run_sweep(bench_sweep_config(true));
        double tp = seconds_since(t0);
        bool same = serial.rows.size() == parallel.rows.size();
        for (std::size_t i = 0; same && i < serial.rows.size(); ++i)
            same = serial.rows[i].mean_err == parallel.rows[i].mean_err &&
                   serial.rows[i].std_err == parallel.rows[i].std_err;
        std::printf("sweep (180 trials):   serial %7.3f s   openmp %7.3f s   speedup %.2fx   %s\n",
                    ts, tp, ts / tp, same ? "bit-identical" : "MISMATCH");
    }

    {
        EstimatorModel am = make_amplitude_model(2.0, 1.0);
        SampledSignal stream = bench_stream(400, 801);
        DemodOptions serial_opt;
        serial_opt.parallel = false;
        auto t0 = Clock::now();
        DemodResult rs = sliding_demodulate(am.plan, stream, 801, {1.0, -1.0}, serial_opt);
        double ts = seconds_since(t0);
        DemodOptions parallel_opt;
        t0 = Clock::now();
        DemodResult rp = sliding_demodulate(am.plan, stream, 801, {1.0, -1.0}, parallel_opt);
        double tp = seconds_since(t0);
        bool same = rs.decisions == rp.decisions && rs.estimates == rp.estimates;
        std::printf("demod (400 windows):  serial %7.3f s   openmp %7.3f s   speedup %.2fx   %s\n",
                    ts, tp, ts / tp, same ? "bit-identical" : "MISMATCH");
    }
    return 0;
}
