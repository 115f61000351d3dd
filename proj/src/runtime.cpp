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

#include "opcalc/runtime.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace opcalc {

// ------------------------------------------------------------------ grid

Grid Grid::over(double width, std::size_t nbar) {
    if (width <= 0.0 || nbar < 1) throw std::invalid_argument("invalid grid request");
    return Grid{width / static_cast<double>(nbar), nbar + 1};
}

double SampledSignal::mean_square() const {
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

// ------------------------------------------------------------------- csv

void atomic_write_text(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string fmt17(double v) {
    char buf[36];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_signal_csv(const std::string& path, const SampledSignal& sig,
                      const std::vector<std::string>& preamble) {
    std::ostringstream os;
    for (const auto& line : preamble) os << "# " << line << "\n";
    os << "t,value\n";
    for (std::size_t i = 0; i < sig.values.size(); ++i)
        os << fmt17(sig.grid.time_at(i)) << "," << fmt17(sig.values[i]) << "\n";
    atomic_write_text(path, os.str());
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<std::string>& preamble) {
    std::ostringstream os;
    for (const auto& line : preamble) os << "# " << line << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt17(row[c]);
        os << "\n";
    }
    atomic_write_text(path, os.str());
}

SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<double> ts, vs;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column names
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<double> nums;
        while (std::getline(ls, field, ',')) nums.push_back(std::stod(field));
        if (nums.size() < 2) throw std::runtime_error("malformed CSV row in " + path);
        ts.push_back(nums.front());
        vs.push_back(nums.back());  // last column carries the measurement
    }
    if (ts.size() < 2) throw std::runtime_error("signal CSV needs at least two samples");
    double dt = ts[1] - ts[0];
    if (dt <= 0.0) throw std::runtime_error("non-increasing time column");
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        if (std::abs(ts[i + 1] - ts[i] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::runtime_error("signal CSV grid is not uniform");
    SampledSignal out{Grid{dt, ts.size()}, std::move(vs)};
    return out;
}

// ------------------------------------------------------------- quadrature

double quad_weight(QuadRule rule, std::size_t i, std::size_t end_idx, double dt) {
    if (end_idx == 0) return 0.0;
    if (rule == QuadRule::Simpson && end_idx % 2 == 0) {
        if (i == 0 || i == end_idx) return dt / 3.0;
        return (i % 2 == 1) ? 4.0 * dt / 3.0 : 2.0 * dt / 3.0;
    }
    // trapezoid (also the odd-segment fallback)
    if (i == 0 || i == end_idx) return dt / 2.0;
    return dt;
}

namespace {

double int_pow(double base, unsigned e) {
    double acc = 1.0;
    while (e) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1u;
    }
    return acc;
}

double factorial(unsigned n) {
    double acc = 1.0;
    for (unsigned i = 2; i <= n; ++i) acc *= static_cast<double>(i);
    return acc;
}

}  // namespace

double atom_kernel(const IntegralAtom& atom, double t, double tau) {
    double v = int_pow(t - tau, atom.k - 1) / factorial(atom.k - 1);
    if (atom.j > 0) v *= int_pow(-tau, atom.j);
    return v;
}

double atom_value(const IntegralAtom& atom, const SampledSignal& x, std::size_t end_idx,
                  QuadRule rule) {
    const double t = x.grid.time_at(end_idx);
    if (atom.src == IntegralAtom::Source::Unit)
        return atom.c_num() * int_pow(t, atom.k - 1) / factorial(atom.k - 1);
    if (end_idx >= x.values.size())
        throw std::invalid_argument("window end beyond the sampled signal");
    double acc = 0.0;
    const double dt = x.grid.dt;
    for (std::size_t i = 0; i <= end_idx; ++i) {
        double w = quad_weight(rule, i, end_idx, dt);
        acc += w * atom_kernel(atom, t, x.grid.time_at(i)) * x.values[i];
    }
    return atom.c_num() * acc;
}

double functional_value(const TimeFunctional& f, const SampledSignal& x, std::size_t end_idx,
                        QuadRule rule) {
    double acc = 0.0;
    for (const auto& a : f.atoms) acc += atom_value(a, x, end_idx, rule);
    return acc;
}

// ---------------------------------------------------------------- solve

LinearSolveResult solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = a.size();
    LinearSolveResult out;
    double det = 1.0;
    for (std::size_t pc = 0; pc < n; ++pc) {
        std::size_t piv = pc;
        for (std::size_t r = pc + 1; r < n; ++r)
            if (std::abs(a[r][pc]) > std::abs(a[piv][pc])) piv = r;
        if (a[piv][pc] == 0.0) {
            out.det = 0.0;
            return out;
        }
        if (piv != pc) {
            std::swap(a[piv], a[pc]);
            std::swap(b[piv], b[pc]);
            det = -det;
        }
        det *= a[pc][pc];
        for (std::size_t r = pc + 1; r < n; ++r) {
            double f = a[r][pc] / a[pc][pc];
            if (f == 0.0) continue;
            for (std::size_t c = pc; c < n; ++c) a[r][c] -= f * a[pc][c];
            b[r] -= f * b[pc];
        }
    }
    out.det = det;
    out.x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * out.x[c];
        out.x[i] = acc / a[i][i];
    }
    out.solved = true;
    return out;
}

std::size_t grid_index_of(const Grid& g, double t) {
    double pos = t / g.dt;
    auto idx = static_cast<std::size_t>(std::llround(pos));
    if (idx >= g.count || std::abs(pos - static_cast<double>(idx)) > 1e-6)
        throw std::invalid_argument("window width is not a grid point");
    return idx;
}

namespace {

LinearSolveResult assemble_and_solve(const EstimatorPlan& plan, const SampledSignal& x,
                                     std::size_t end_idx, QuadRule rule) {
    const unsigned rho = plan.arity();
    std::vector<std::vector<double>> A(rho, std::vector<double>(rho));
    std::vector<double> B(rho);
    for (unsigned r = 0; r < rho; ++r) {
        for (unsigned i = 0; i < rho; ++i)
            A[r][i] = functional_value(plan.A[r][i], x, end_idx, rule);
        B[r] = functional_value(plan.B[r], x, end_idx, rule);
    }
    return solve_dense(std::move(A), std::move(B));
}

}  // namespace

EstimateResult evaluate_plan(const EstimatorPlan& plan, const SampledSignal& x, double t,
                             const EvalOptions& opt) {
    if (plan.arity() == 0 || plan.arity() > 4)
        throw std::invalid_argument("plan arity must be between 1 and 4");
    EstimateResult res;
    res.window = t;
    std::size_t end_idx = grid_index_of(x.grid, t);
    std::size_t last = x.values.size() - 1;

    LinearSolveResult here = assemble_and_solve(plan, x, end_idx, opt.rule);
    res.divisor = here.det;
    LinearSolveResult ref = end_idx == last ? here : assemble_and_solve(plan, x, last, opt.rule);
    res.divisor_ref = std::abs(ref.det);

    if (res.divisor_ref == 0.0 || std::abs(res.divisor) < opt.eps_div * res.divisor_ref) {
        res.guard_ok = false;
        res.diagnostic = "divisor too small at this window";
        return res;
    }
    if (!here.solved) {
        res.guard_ok = false;
        res.diagnostic = "numerical singularity beyond the divisor guard";
        return res;
    }
    res.guard_ok = true;
    res.estimates = std::move(here.x);
    return res;
}

DemodResult sliding_demodulate(const EstimatorPlan& plan, const SampledSignal& stream,
                               std::size_t samples_per_symbol,
                               const std::vector<double>& constellation,
                               const DemodOptions& opt) {
    if (constellation.empty()) throw std::invalid_argument("empty constellation");
    if (samples_per_symbol < 3) throw std::invalid_argument("need at least 3 samples per symbol");
    if (stream.values.size() % samples_per_symbol != 0)
        throw std::invalid_argument("stream length must be a whole number of symbol windows");
    const std::size_t nsym = stream.values.size() / samples_per_symbol;

    DemodResult out;
    out.symbols = nsym;
    out.decisions.assign(nsym, -1);
    out.estimates.assign(nsym, std::numeric_limits<double>::quiet_NaN());
    out.low_confidence.assign(nsym, false);
    std::vector<char> erased(nsym, 0);

    // each symbol owns a whole window; the carrier restarts at its origin
    const double width = stream.grid.dt * static_cast<double>(samples_per_symbol - 1);

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(nsym); ++w) {
        const std::size_t base = static_cast<std::size_t>(w) * samples_per_symbol;
        SampledSignal window{Grid{stream.grid.dt, samples_per_symbol},
                             std::vector<double>(stream.values.begin() + base,
                                                 stream.values.begin() + base +
                                                     samples_per_symbol)};
        EstimateResult est = evaluate_plan(plan, window, width, opt.eval);
        if (!est.guard_ok) {
            erased[static_cast<std::size_t>(w)] = 1;
            continue;
        }
        double value = est.estimates[0];
        int best = 0;
        double best_d = std::abs(value - constellation[0]);
        double second_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 1; c < constellation.size(); ++c) {
            double d = std::abs(value - constellation[c]);
            if (d < best_d) {
                second_d = best_d;
                best_d = d;
                best = static_cast<int>(c);
            } else {
                second_d = std::min(second_d, d);
            }
        }
        out.decisions[static_cast<std::size_t>(w)] = best;
        out.estimates[static_cast<std::size_t>(w)] = value;
        double scale = std::max({1.0, best_d, second_d});
        if (second_d - best_d <= 1e-9 * scale)
            out.low_confidence[static_cast<std::size_t>(w)] = true;
    }

    for (std::size_t w = 0; w < nsym; ++w)
        if (erased[w]) ++out.erasures;
    out.decided = nsym - out.erasures;
    return out;
}

double snr_db(const SampledSignal& signal, const SampledSignal& noise) {
    if (signal.values.size() != noise.values.size())
        throw std::invalid_argument("snr: grids differ");
    double ps = signal.mean_square();
    double pn = noise.mean_square();
    if (pn == 0.0) return std::numeric_limits<double>::infinity();
    if (ps == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(ps / pn);
}

}  // namespace opcalc
