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

#include "opcalc/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace opcalc {

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    SlopeFit fit;
    if (xs.size() != ys.size() || xs.size() < 3) return fit;  // needs >= 3 cells
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log10(xs[i]), ly = std::log10(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom == 0.0) return fit;
    fit.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::log10(ys[i]) - (fit.intercept + fit.slope * std::log10(xs[i]));
        ss += r * r;
    }
    if (n > 2) {
        double var = ss / static_cast<double>(n - 2);
        fit.stderr_slope = std::sqrt(var * static_cast<double>(n) / denom);
        fit.ci95 = 2.0 * fit.stderr_slope;
    }
    fit.points = static_cast<unsigned>(n);
    fit.valid = true;
    return fit;
}

namespace {

struct FlatAtom {
    double c;
    unsigned k1;  // k - 1
    unsigned j;
    double inv_fact;
    std::size_t slot;
};

struct FlatPlan {
    unsigned rho = 0;
    std::vector<FlatAtom> measured;      // accumulated by quadrature
    std::vector<IntegralAtom> units;     // closed forms, per slot
    std::vector<std::size_t> unit_slots;
};

double factorial(unsigned n) {
    double acc = 1.0;
    for (unsigned i = 2; i <= n; ++i) acc *= static_cast<double>(i);
    return acc;
}

double int_pow(double base, unsigned e) {
    double acc = 1.0;
    while (e) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1u;
    }
    return acc;
}

FlatPlan flatten(const EstimatorPlan& plan) {
    FlatPlan fp;
    fp.rho = plan.arity();
    auto take = [&](const TimeFunctional& f, std::size_t slot) {
        for (const auto& a : f.atoms) {
            if (a.src == IntegralAtom::Source::Unit) {
                fp.units.push_back(a);
                fp.unit_slots.push_back(slot);
            } else {
                fp.measured.push_back(
                    {a.c_num(), a.k - 1, a.j, 1.0 / factorial(a.k - 1), slot});
            }
        }
    };
    for (unsigned r = 0; r < fp.rho; ++r) {
        for (unsigned i = 0; i < fp.rho; ++i) take(plan.A[r][i], r * fp.rho + i);
        take(plan.B[r], fp.rho * fp.rho + r);
    }
    return fp;
}

struct TrialOutcome {
    double err = 0.0;
    double snr = 0.0;
    bool erased = true;
};

// one streaming pass: carrier + noise -> atom accumulators -> solve
TrialOutcome run_trial(const SweepConfig& cfg, const FlatPlan& fp, std::size_t cell_idx,
                       std::uint64_t trial) {
    const SweepCell& cell = cfg.cells[cell_idx];
    const Grid grid = Grid::over(cfg.window, cell.nbar);
    const double t = grid.width();
    const std::size_t end_idx = grid.count - 1;

    RngKey key{cfg.seed, cell_idx, trial};
    NoiseStream noise(cell.noise, key);

    std::vector<double> acc(fp.rho * fp.rho + fp.rho, 0.0);
    double sig_sq = 0.0, noi_sq = 0.0;
    for (std::size_t i = 0; i <= end_idx; ++i) {
        const double ti = grid.time_at(i);
        const double w = quad_weight(cfg.rule, i, end_idx, grid.dt);
        const double c = carrier_value(cfg.carrier, ti);
        const double nv = noise.next(i, ti);
        const double x = c + nv;
        sig_sq += c * c;
        noi_sq += nv * nv;
        const double wx = w * x;
        for (const auto& a : fp.measured) {
            double kern = int_pow(t - ti, a.k1) * a.inv_fact;
            if (a.j) kern *= int_pow(-ti, a.j);
            acc[a.slot] += a.c * kern * wx;
        }
    }
    for (std::size_t u = 0; u < fp.units.size(); ++u) {
        const auto& a = fp.units[u];
        acc[fp.unit_slots[u]] += a.c_num() * int_pow(t, a.k - 1) / factorial(a.k - 1);
    }

    std::vector<std::vector<double>> A(fp.rho, std::vector<double>(fp.rho));
    std::vector<double> B(fp.rho);
    for (unsigned r = 0; r < fp.rho; ++r) {
        for (unsigned i = 0; i < fp.rho; ++i) A[r][i] = acc[r * fp.rho + i];
        B[r] = acc[fp.rho * fp.rho + r];
    }
    LinearSolveResult solve = solve_dense(std::move(A), std::move(B));

    TrialOutcome out;
    const double n = static_cast<double>(grid.count);
    out.snr = 10.0 * std::log10((sig_sq / n) / (noi_sq > 0.0 ? noi_sq / n : 1e-300));
    if (!solve.solved || solve.det == 0.0 || !std::isfinite(solve.x[cfg.param_index]))
        return out;  // erased
    out.erased = false;
    out.err = std::abs(solve.x[static_cast<std::size_t>(cfg.param_index)] -
                       cfg.truth[static_cast<std::size_t>(cfg.param_index)]);
    return out;
}

}  // namespace

SweepReport run_sweep(const SweepConfig& cfg) {
    if (cfg.cells.size() < 2) throw std::invalid_argument("sweep needs at least 2 cells");
    if (cfg.trials < 1) throw std::invalid_argument("sweep needs at least 1 trial per cell");
    if (cfg.truth.size() != cfg.plan.arity())
        throw std::invalid_argument("truth vector does not match the plan arity");

    const FlatPlan fp = flatten(cfg.plan);
    const std::size_t n_cells = cfg.cells.size();
    const std::size_t n_tasks = n_cells * cfg.trials;
    std::vector<TrialOutcome> results(n_tasks);

#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
    for (std::ptrdiff_t task = 0; task < static_cast<std::ptrdiff_t>(n_tasks); ++task) {
        const std::size_t cell = static_cast<std::size_t>(task) / cfg.trials;
        const std::uint64_t trial = static_cast<std::uint64_t>(task) % cfg.trials;
        results[static_cast<std::size_t>(task)] = run_trial(cfg, fp, cell, trial);
    }

    // deterministic fold in task order
    SweepReport report;
    report.seed = cfg.seed;
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        SweepRow row;
        row.swept = cfg.cells[cell].swept;
        row.nbar = static_cast<double>(cfg.cells[cell].nbar);
        row.noise_amp = cfg.cells[cell].noise.amplitude;
        if (cfg.cells[cell].noise.kind == NoiseSpec::Kind::SinusoidSum &&
            !cfg.cells[cell].noise.tones.empty())
            row.noise_amp = cfg.cells[cell].noise.tones[0].amplitude;

        double sum = 0.0, snr_sum = 0.0;
        std::vector<double> errs;
        for (unsigned trial = 0; trial < cfg.trials; ++trial) {
            const auto& r = results[cell * cfg.trials + trial];
            if (r.erased) {
                ++row.erasures;
                continue;
            }
            errs.push_back(r.err);
            sum += r.err;
            snr_sum += r.snr;
        }
        row.trials_run = errs.size();
        if (!errs.empty()) {
            row.mean_err = sum / static_cast<double>(errs.size());
            row.mean_snr_db = snr_sum / static_cast<double>(errs.size());
            double ss = 0.0;
            for (double e : errs) ss += (e - row.mean_err) * (e - row.mean_err);
            row.std_err = errs.size() > 1
                              ? std::sqrt(ss / static_cast<double>(errs.size() - 1))
                              : 0.0;
        } else {
            report.degenerate = true;  // excluded from the fit below
        }
        report.rows.push_back(row);
    }

    std::vector<double> xs, ys;
    for (const auto& row : report.rows) {
        if (row.trials_run == 0) continue;
        double metric = cfg.fit_metric == SweepConfig::Metric::MeanErr ? row.mean_err
                                                                       : row.std_err;
        if (metric <= 0.0) continue;
        xs.push_back(row.swept);
        ys.push_back(metric);
    }
    report.fit = fit_loglog(xs, ys);
    return report;
}

std::vector<double> predict_error_std(const EstimatorPlan& plan,
                                      const std::vector<double>& truth,
                                      const SampledSignal& clean, double t,
                                      QuadRule rule, double noise_amp) {
    const unsigned rho = plan.arity();
    if (truth.size() != rho) throw std::invalid_argument("truth vector arity mismatch");
    const std::size_t end_idx = grid_index_of(clean.grid, t);

    // numeric A on the clean signal, then its inverse columnwise
    std::vector<std::vector<double>> A(rho, std::vector<double>(rho));
    for (unsigned r = 0; r < rho; ++r)
        for (unsigned i = 0; i < rho; ++i)
            A[r][i] = functional_value(plan.A[r][i], clean, end_idx, rule);
    std::vector<std::vector<double>> invA(rho, std::vector<double>(rho));
    for (unsigned c = 0; c < rho; ++c) {
        std::vector<double> e(rho, 0.0);
        e[c] = 1.0;
        LinearSolveResult s = solve_dense(A, e);
        if (!s.solved || s.det == 0.0)
            throw std::runtime_error("variance prediction: singular system on the clean signal");
        for (unsigned r = 0; r < rho; ++r) invA[r][c] = s.x[r];
    }

    // discrete variance of theta = -invA * c(w), w unit variance per sample
    std::vector<double> var(rho, 0.0);
    std::vector<double> row_kernel(rho);
    for (std::size_t i = 0; i <= end_idx; ++i) {
        const double tau = clean.grid.time_at(i);
        const double w = quad_weight(rule, i, end_idx, clean.grid.dt);
        for (unsigned r = 0; r < rho; ++r) {
            double kr = 0.0;
            for (unsigned kth = 0; kth < rho; ++kth) {
                for (const auto& a : plan.A[r][kth].atoms)
                    if (a.src == IntegralAtom::Source::Measured)
                        kr += truth[kth] * a.c_num() * atom_kernel(a, t, tau);
            }
            for (const auto& a : plan.B[r].atoms)
                if (a.src == IntegralAtom::Source::Measured)
                    kr -= a.c_num() * atom_kernel(a, t, tau);
            row_kernel[r] = w * kr;
        }
        for (unsigned p = 0; p < rho; ++p) {
            double v = 0.0;
            for (unsigned r = 0; r < rho; ++r) v -= invA[p][r] * row_kernel[r];
            var[p] += v * v;
        }
    }
    std::vector<double> out(rho);
    for (unsigned p = 0; p < rho; ++p) out[p] = noise_amp * std::sqrt(var[p]);
    return out;
}

// --------------------------------------------------------------------- SER

SerReport run_ser(const SerConfig& cfg) {
    if (cfg.constellation.size() < 2)
        throw std::invalid_argument("SER experiment needs at least two symbols");
    if (cfg.nbar_values.empty()) throw std::invalid_argument("no grid sizes given");
    if (cfg.symbols < 1) throw std::invalid_argument("need at least one symbol");

    const FlatPlan fp = flatten(cfg.plan);
    SerReport report;
    report.seed = cfg.seed;

    // half the minimum constellation distance sets the error threshold
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < cfg.constellation.size(); ++a)
        for (std::size_t b = a + 1; b < cfg.constellation.size(); ++b)
            dmin = std::min(dmin, std::abs(cfg.constellation[a] - cfg.constellation[b]));

    for (std::size_t cell = 0; cell < cfg.nbar_values.size(); ++cell) {
        const std::uint64_t nbar = cfg.nbar_values[cell];
        const Grid grid = Grid::over(cfg.window, nbar);
        const double t = grid.width();
        const std::size_t end_idx = grid.count - 1;

        // unit-amplitude carrier over one symbol window
        SampledSignal carrier = carrier_sample(cfg.carrier, grid);
        const double p_sig = carrier.mean_square();
        const double noise_amp =
            std::sqrt(p_sig * std::pow(10.0, -cfg.snr_target_db / 10.0));
        double corr_den = 0.0;
        for (double c : carrier.values) corr_den += c * c;

        if (cell == 0) {
            auto pred = predict_error_std(cfg.plan, {cfg.constellation[0]}, carrier, t,
                                          cfg.rule, noise_amp);
            double sigma = pred[static_cast<std::size_t>(cfg.param_index)];
            report.variance_constant = sigma * std::sqrt(static_cast<double>(nbar));
            const double z99 = 2.3263478740408408;  // one-sided 1% normal quantile
            double sigma_star = (dmin / 2.0) / z99;
            report.predicted_nbar_for_1pct =
                (report.variance_constant / sigma_star) * (report.variance_constant / sigma_star);
        }

        NoiseSpec nspec;
        nspec.kind = NoiseSpec::Kind::White;
        nspec.dist = cfg.dist;
        nspec.amplitude = noise_amp;

        std::vector<std::uint8_t> alg_wrong(cfg.symbols, 0), corr_wrong(cfg.symbols, 0),
            erased(cfg.symbols, 0);
        std::vector<double> snr_acc(cfg.symbols, 0.0);

#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
        for (std::ptrdiff_t sym = 0; sym < static_cast<std::ptrdiff_t>(cfg.symbols); ++sym) {
            RngKey key{cfg.seed, cell, static_cast<std::uint64_t>(sym)};
            // symbol draw on a stream disjoint from the sample streams
            double u = counter_uniform(key, 0, 11);
            auto sym_idx = std::min<std::size_t>(
                static_cast<std::size_t>(u * static_cast<double>(cfg.constellation.size())),
                cfg.constellation.size() - 1);
            const double truth = cfg.constellation[sym_idx];

            NoiseStream noise(nspec, key);
            std::vector<double> acc(fp.rho * fp.rho + fp.rho, 0.0);
            double mf = 0.0, sig_sq = 0.0, noi_sq = 0.0;
            for (std::size_t i = 0; i <= end_idx; ++i) {
                const double ti = grid.time_at(i);
                const double w = quad_weight(cfg.rule, i, end_idx, grid.dt);
                const double c = carrier.values[i];
                const double nv = noise.next(i, ti);
                const double x = truth * c + nv;
                sig_sq += truth * c * truth * c;
                noi_sq += nv * nv;
                mf += x * c;
                const double wx = w * x;
                for (const auto& a : fp.measured) {
                    double kern = int_pow(t - ti, a.k1) * a.inv_fact;
                    if (a.j) kern *= int_pow(-ti, a.j);
                    acc[a.slot] += a.c * kern * wx;
                }
            }
            for (std::size_t uat = 0; uat < fp.units.size(); ++uat) {
                const auto& a = fp.units[uat];
                acc[fp.unit_slots[uat]] += a.c_num() * int_pow(t, a.k - 1) / factorial(a.k - 1);
            }
            std::vector<std::vector<double>> A(fp.rho, std::vector<double>(fp.rho));
            std::vector<double> B(fp.rho);
            for (unsigned r = 0; r < fp.rho; ++r) {
                for (unsigned i2 = 0; i2 < fp.rho; ++i2) A[r][i2] = acc[r * fp.rho + i2];
                B[r] = acc[fp.rho * fp.rho + r];
            }
            LinearSolveResult solve = solve_dense(std::move(A), std::move(B));
            snr_acc[static_cast<std::size_t>(sym)] =
                10.0 * std::log10(sig_sq / (noi_sq > 0.0 ? noi_sq : 1e-300));

            auto nearest = [&](double v) {
                std::size_t best = 0;
                double bd = std::abs(v - cfg.constellation[0]);
                for (std::size_t cdx = 1; cdx < cfg.constellation.size(); ++cdx) {
                    double d = std::abs(v - cfg.constellation[cdx]);
                    if (d < bd) {
                        bd = d;
                        best = cdx;
                    }
                }
                return best;
            };

            if (!solve.solved || solve.det == 0.0 ||
                !std::isfinite(solve.x[static_cast<std::size_t>(cfg.param_index)])) {
                erased[static_cast<std::size_t>(sym)] = 1;
            } else if (nearest(solve.x[static_cast<std::size_t>(cfg.param_index)]) != sym_idx) {
                alg_wrong[static_cast<std::size_t>(sym)] = 1;
            }
            double corr_est = mf / corr_den;
            if (nearest(corr_est) != sym_idx) corr_wrong[static_cast<std::size_t>(sym)] = 1;
        }

        SerRow row;
        row.nbar = static_cast<double>(nbar);
        row.noise_amp = noise_amp;
        std::size_t alg = 0, corr = 0, ers = 0;
        double snr_sum = 0.0;
        for (std::size_t s = 0; s < cfg.symbols; ++s) {
            alg += alg_wrong[s];
            corr += corr_wrong[s];
            ers += erased[s];
            snr_sum += snr_acc[s];
        }
        row.erasures = ers;
        const double decided = static_cast<double>(cfg.symbols - ers);
        row.ser_algebraic = decided > 0.0 ? static_cast<double>(alg) / decided : 1.0;
        row.ser_correlation = static_cast<double>(corr) / static_cast<double>(cfg.symbols);
        row.snr_db = snr_sum / static_cast<double>(cfg.symbols);
        if (decided == 0.0) report.degenerate = true;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace opcalc
