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

#ifndef OPCALC_MODELS_HPP
#define OPCALC_MODELS_HPP

#include "opcalc/carrier.hpp"
#include "opcalc/estimator_plan.hpp"

namespace opcalc {

/// A ready-to-run estimation problem: the symbolic relation with the
/// estimated parameters left free, the identifiability inputs, the
/// compiled plan, and the numeric carrier with the ground truth.
struct EstimatorModel {
    std::string id;
    OperationalRelation relation;   // estimated parameters symbolic
    std::vector<SymId> thetas;
    std::vector<double> truth;      // one value per theta
    CarrierSpec carrier;
    MinimalEquation equation;       // feeds the coefficient form
    ModulePtr module;
    LinearSystemSpec system;
    EstimatorPlan plan;
};

/// theta * sin(omega t), omega known, theta estimated.
EstimatorModel make_amplitude_model(double omega, double amplitude_truth);

/// A sin(omega t + phi) = a sin(omega t)... + b cos(...); omega known,
/// a = A cos phi and b = A sin phi estimated.
EstimatorModel make_phase_model(double omega, double amplitude, double phase);

/// A sin(omega t + phi) with everything unknown; theta = omega^2 estimated
/// through the homogenized relation.
EstimatorModel make_frequency_model(double omega, double amplitude, double phase);

/// Rational transform num/den with simple poles; every surviving
/// coefficient except the designated leading one is estimated.
EstimatorModel make_rational_model(const std::vector<double>& num,
                                   const std::vector<double>& den);

/// Fully numeric annihilator of a carrier class, for round-trip checks.
DiffOp carrier_annihilator(const CarrierSpec& spec);

}  // namespace opcalc

#endif
