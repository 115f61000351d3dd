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

#ifndef OPCALC_RUNTIME_HPP
#define OPCALC_RUNTIME_HPP

#include "opcalc/estimator_plan.hpp"
#include "opcalc/grid.hpp"

namespace opcalc {

enum class QuadRule { Simpson, Trapezoid };

/// Quadrature weight of node i on the window [0, end_idx*dt].  Composite
/// Simpson needs an even segment count; odd counts fall back to the
/// trapezoid rule for the whole window.
double quad_weight(QuadRule rule, std::size_t i, std::size_t end_idx, double dt);

/// Integrand kernel of a measured atom at window width t.
double atom_kernel(const IntegralAtom& atom, double t, double tau);

/// One atom on a sampled signal over [0, t], t = end_idx * dt.  Unit atoms
/// evaluate in closed form, measured atoms by quadrature.
double atom_value(const IntegralAtom& atom, const SampledSignal& x, std::size_t end_idx,
                  QuadRule rule);

double functional_value(const TimeFunctional& f, const SampledSignal& x, std::size_t end_idx,
                        QuadRule rule);

struct EvalOptions {
    QuadRule rule = QuadRule::Simpson;
    double eps_div = 1e-8;  // relative divisor guard
};

/// Partial-pivot Gaussian elimination for the small dense systems.
struct LinearSolveResult {
    double det = 0.0;
    bool solved = false;
    std::vector<double> x;
};
LinearSolveResult solve_dense(std::vector<std::vector<double>> a, std::vector<double> b);

/// Index of t on the grid; throws when t is not a grid point.
std::size_t grid_index_of(const Grid& g, double t);

struct EstimateResult {
    std::vector<double> estimates;  // empty unless the guard passes
    double divisor = 0.0;
    double divisor_ref = 0.0;  // window-max reference used by the guard
    bool guard_ok = false;
    double window = 0.0;
    std::string diagnostic;
};

/// Assemble the numeric system at window width t (a grid point), guard the
/// divisor against the window-end reference, solve by partial-pivot
/// Gaussian elimination (arity <= 4).
EstimateResult evaluate_plan(const EstimatorPlan& plan, const SampledSignal& x, double t,
                             const EvalOptions& opt = {});

struct DemodOptions {
    EvalOptions eval;
    bool parallel = true;
};

struct DemodResult {
    std::vector<int> decisions;       // constellation index, -1 when erased
    std::vector<double> estimates;    // NaN when erased
    std::vector<bool> low_confidence; // tie or near-tie decisions
    std::size_t symbols = 0;
    std::size_t erasures = 0;
    std::size_t decided = 0;
};

/// Per-symbol-window estimation and nearest-point decision; ties break
/// toward the smaller constellation index.  Guard failures erase the
/// symbol instead of deciding it.
DemodResult sliding_demodulate(const EstimatorPlan& plan, const SampledSignal& stream,
                               std::size_t samples_per_symbol,
                               const std::vector<double>& constellation,
                               const DemodOptions& opt = {});

/// 10 log10 of the mean-square ratio; +/- infinity on zero power.
double snr_db(const SampledSignal& signal, const SampledSignal& noise);

}  // namespace opcalc

#endif
