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

#ifndef OPCALC_TIME_ODE_HPP
#define OPCALC_TIME_ODE_HPP

#include "opcalc/torsion_module.hpp"

namespace opcalc {

/// One term c * t^m * z^(nu)(t) of a linear ODE with polynomial coefficients.
struct OdeTerm {
    ParamScalar c;
    unsigned t_pow = 0;
    unsigned d_order = 0;
};

/// sum of OdeTerm = 0, together with the initial values z^(i)(0) needed by
/// the transform (one per derivative order below the highest).
class TimeOde {
  public:
    TimeOde(std::vector<OdeTerm> terms, std::vector<ParamScalar> initial_values);

    const std::vector<OdeTerm>& terms() const { return terms_; }
    const std::vector<ParamScalar>& initial_values() const { return initial_values_; }
    unsigned max_order() const;

    TimeOde scaled(const ParamScalar& c) const;
    TimeOde operator+(const TimeOde& rhs) const;  // shared initial values required

  private:
    std::vector<OdeTerm> terms_;
    std::vector<ParamScalar> initial_values_;
};

/// Operational-domain image of a time ODE: lhs applied to the transform of
/// the signal equals the forcing polynomial built from the initial values.
struct OperationalRelation {
    DiffOp lhs;
    SPoly rhs;
    std::vector<SymId> params;  // every symbol appearing anywhere in the relation

    OperationalRelation substitute(SymId sym, const BigRat& value) const;
    std::string to_string() const;
};

/// Transform under x(s) = int_0^inf exp(-s t) x(t) dt:
/// c t^m z^(nu)  ->  c (-d/ds)^m (s^nu x - initial-value polynomial).
OperationalRelation to_operational(const TimeOde& ode);

/// Kill the forcing polynomial by differentiating (deg rhs + 1) times.
/// A zero right-hand side needs no derivatives.
DiffOp homogenize(const OperationalRelation& rel);

/// Coprime-coefficient relation sum_i q_i x^(i) = p with a designated
/// leading coefficient normalized to 1.
struct MinimalEquation {
    std::vector<SPoly> q;  // q[i] multiplies x^(i); size = order + 1
    SPoly p;
    unsigned order() const { return static_cast<unsigned>(q.size()) - 1; }

    std::string to_string() const;
};

/// Minimal equation of a nonzero rational transform (order 0).
MinimalEquation minimal_equation(const RatFunc& xhat);

/// Interpret a relation with polynomial coefficients as an equation of the
/// minimal-equation shape, clearing denominators and normalizing.
MinimalEquation relation_as_equation(const OperationalRelation& rel);

/// Multiply an equation through by a polynomial (used to build the
/// deliberately non-minimal counterexamples).
MinimalEquation premultiply(const MinimalEquation& me, const SPoly& m);

/// Module whose reduction rule is the given equation, solved for the top
/// derivative.  Minimality of the equation is assumed, not derived.
ModulePtr module_from_equation(const MinimalEquation& me);

}  // namespace opcalc

#endif
