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

#ifndef OPCALC_IDENTIFIABILITY_HPP
#define OPCALC_IDENTIFIABILITY_HPP

#include <cstdint>

#include "opcalc/time_ode.hpp"

namespace opcalc {

/// The equation rewritten as monomial-by-monomial coefficients:
/// sum a_{mu,nu} s^mu x^(nu)  -  sum b_kappa s^kappa = 0.
struct CoefficientForm {
    struct SigTerm {
        ParamScalar a;
        unsigned mu, nu;
    };
    struct ForceTerm {
        ParamScalar b;
        unsigned kappa;
    };
    std::vector<SigTerm> sig;      // N + 1 terms
    std::vector<ForceTerm> force;  // M terms

    unsigned n_sig() const { return static_cast<unsigned>(sig.size()); }
    unsigned n_force() const { return static_cast<unsigned>(force.size()); }
    unsigned matrix_order() const { return n_sig() + n_force(); }  // N + M + 1
};

CoefficientForm to_coefficient_form(const MinimalEquation& me);

/// Square matrix of order N+M+1 whose row xi holds the xi-th s-derivatives
/// of the column functions (s^mu x^(nu), ..., s^kappa, ...).  Singular by
/// construction; rank N+M exactly characterizes minimality.
class MMatrix {
  public:
    MMatrix(const CoefficientForm& cf, ModulePtr module);

    unsigned order() const { return order_; }
    const ModuleElement& at(unsigned row, unsigned col) const { return rows_[row][col]; }
    const ModulePtr& module() const { return module_; }

  private:
    unsigned order_;
    ModulePtr module_;
    std::vector<std::vector<ModuleElement>> rows_;
};

inline MMatrix build_M(const CoefficientForm& cf, ModulePtr module) {
    return MMatrix(cf, std::move(module));
}

struct RankOptions {
    std::uint64_t seed = 1;
    int votes = 3;           // independent specializations per round
    int max_pole_retries = 32;
    long bound = 1000000;    // numerator/denominator bound for sample points
};

struct RankReport {
    unsigned rank = 0;
    unsigned order = 0;
    bool probabilistic = true;
    std::vector<std::uint64_t> seeds_used;
    int pole_retries = 0;
};

/// Rank over the function field by exact Gaussian elimination at random
/// rational specializations of the parameters, of s, and of the basis
/// signal slots; majority over `votes` rounds, one extra round on
/// disagreement.
RankReport rank_of(const MMatrix& m, const RankOptions& opt = {});

/// Exact rank of a rational matrix.
unsigned rank_exact(std::vector<std::vector<BigRat>> a);

/// Exact determinant when every entry lies in the 1-slot (order-0 module).
RatFunc det_symbolic(const MMatrix& m);

/// Exact kernel vector of one specialization, normalized so that the entry
/// at `normalize_index` equals 1.  Requires nullity exactly 1 at the
/// specialization.
std::vector<BigRat> kernel_vector(const MMatrix& m, std::uint64_t seed,
                                  unsigned normalize_index, const RankOptions& opt = {});

struct IdentReport {
    bool identifiable = false;
    unsigned rank = 0, expected_rank = 0;
    unsigned N = 0, M = 0;
    int normalization_index = -1;   // column with a certified nonzero coefficient
    bool probabilistic = true;
    std::vector<std::uint64_t> seeds_used;
    std::string to_json() const;
};

IdentReport is_projectively_identifiable(const CoefficientForm& cf, ModulePtr module,
                                         const RankOptions& opt = {});

// ---------------------------------------------------------------------
// linear estimator systems (theta affine)

/// c * s^{s_pow} (d/ds)^{d_ord} applied to the signal transform, or
/// c * s^{s_pow} applied to the constant function 1.
struct OpTerm {
    BigRat c;
    int s_pow = 0;
    unsigned d_ord = 0;
    bool unit = false;

    bool operator==(const OpTerm& rhs) const {
        return c == rhs.c && s_pow == rhs.s_pow && d_ord == rhs.d_ord && unit == rhs.unit;
    }
};
using OpExpr = std::vector<OpTerm>;  // canonical: merged, sorted

OpExpr merge_terms(OpExpr terms);
OpExpr scale_expr(const OpExpr& e, const BigRat& c);
OpExpr shift_expr(const OpExpr& e, int s_shift);

struct LinearSystemSpec {
    std::vector<SymId> thetas;            // rho parameters
    std::vector<std::vector<OpExpr>> A;   // rho x rho, coefficient of theta_i in row r
    std::vector<OpExpr> B;                // rho, theta-free side
    bool strictly_proper = false;

    unsigned arity() const { return static_cast<unsigned>(thetas.size()); }
};

/// Build the rho-row system from one affine relation by the s^{-m}
/// multiplier family, m = K .. K+rho-1.  Initial-condition symbols outside
/// the estimated set are eliminated by homogenization first.
LinearSystemSpec build_estimator_system(const OperationalRelation& rel,
                                        const std::vector<SymId>& thetas,
                                        int multiplier_offset = 0);

}  // namespace opcalc

#endif
