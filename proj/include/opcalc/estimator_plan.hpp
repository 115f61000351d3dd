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

#ifndef OPCALC_ESTIMATOR_PLAN_HPP
#define OPCALC_ESTIMATOR_PLAN_HPP

#include "opcalc/identifiability.hpp"

namespace opcalc {

/// One executable integral.  A measured atom is
///   c * int_0^t (t-tau)^{k-1}/(k-1)! * (-tau)^j * x(tau) dtau,
/// a unit atom the closed form c * t^{k-1}/(k-1)! (j must be 0).
struct IntegralAtom {
    enum class Source { Measured, Unit };
    BigRat c;          // exact until numeric evaluation
    unsigned k = 1;    // integration multiplicity >= 1
    unsigned j = 0;    // tau power from the derivative order
    Source src = Source::Measured;

    double c_num() const { return rat_to_double(c); }
};

struct TimeFunctional {
    std::vector<IntegralAtom> atoms;  // merged on (k, j, src)
};

/// Compiled linear system in the time domain.  The divisor is the
/// determinant of the numeric A matrix at the window width.
struct EstimatorPlan {
    std::vector<std::string> params;
    std::vector<std::vector<TimeFunctional>> A;  // rho x rho
    std::vector<TimeFunctional> B;               // rho

    unsigned arity() const { return static_cast<unsigned>(params.size()); }

    std::string to_json() const;
    static EstimatorPlan from_json(const std::string& text);
    std::string atom_table() const;  // human-readable derive output
};

/// Multiply every row by s^-K_row so only negative powers of s remain.
/// K_row is one past the largest nonnegative power in the row (0 when the
/// row is already strictly proper).
LinearSystemSpec normalize_strictly_proper(const LinearSystemSpec& sys);

/// Operational-to-time compilation of a strictly proper system.
EstimatorPlan compile_plan(const LinearSystemSpec& sys, const std::vector<SymId>& names);

/// Compile a homogeneous annihilator into the functional that must vanish
/// on every solution of the source equation (normalizes internally).
TimeFunctional compile_annihilator(const DiffOp& op);

/// Per-row image of an additive perturbation: row r of the compiled system
/// applied to w is  sum_i theta_i * A[r][i](w) - B[r](w).
struct NoiseImage {
    std::vector<std::vector<TimeFunctional>> theta_part;  // rho x rho
    std::vector<TimeFunctional> b_part;                   // rho
};
NoiseImage perturbation_image(const EstimatorPlan& plan);

}  // namespace opcalc

#endif
