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

#ifndef OPCALC_PARAM_FIELD_HPP
#define OPCALC_PARAM_FIELD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace opcalc {

/// Exact arbitrary-precision rational.
using BigRat = mpq_class;

BigRat rat_from_double(double x);   // exact: doubles are dyadic rationals
double rat_to_double(const BigRat& q);
BigRat rat_from_string(const std::string& s);  // "num/den" or integer
std::string rat_to_string(const BigRat& q);

using SymId = std::uint32_t;

/// Process-global, append-only registry of parameter symbol names.
class SymbolTable {
  public:
    static SymId intern(const std::string& name);
    static const std::string& name(SymId id);
};

/// Monomial in the parameter symbols: sorted (symbol, exponent) pairs,
/// exponents > 0.  The empty monomial is 1.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(SymId s, unsigned e = 1);

    unsigned degree_of(SymId s) const;
    unsigned total_degree() const;
    bool is_one() const { return factors_.empty(); }
    bool divides(const Monomial& other) const;

    Monomial operator*(const Monomial& rhs) const;
    Monomial divide(const Monomial& rhs) const;  // requires rhs.divides(*this)

    // graded lex: total degree first, then lexicographic on exponents
    bool operator<(const Monomial& rhs) const;
    bool operator==(const Monomial& rhs) const { return factors_ == rhs.factors_; }

    const std::vector<std::pair<SymId, unsigned>>& factors() const { return factors_; }
    std::string to_string() const;

  private:
    std::vector<std::pair<SymId, unsigned>> factors_;
};

/// Multivariate polynomial over the rationals in the parameter symbols.
/// Terms are kept in a map under the monomial order, so iteration (and
/// hence every derived canonical form) is deterministic.
class MultiPoly {
  public:
    MultiPoly() = default;
    MultiPoly(const BigRat& c);                      // constant
    MultiPoly(const BigRat& c, const Monomial& m);   // c * m
    static MultiPoly symbol(SymId s);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const BigRat* constant_value() const;  // nullptr unless constant (incl. zero)

    MultiPoly operator+(const MultiPoly& rhs) const;
    MultiPoly operator-(const MultiPoly& rhs) const;
    MultiPoly operator*(const MultiPoly& rhs) const;
    MultiPoly operator-() const;
    bool operator==(const MultiPoly& rhs) const { return terms_ == rhs.terms_; }

    unsigned total_degree() const;
    unsigned degree_in(SymId s) const;
    void collect_symbols(std::set<SymId>& out) const;

    /// Leading term under the monomial order.
    const std::pair<const Monomial, BigRat>& leading() const;

    MultiPoly scaled(const BigRat& c) const;

    /// Exact division; nullopt when rhs does not divide this.
    std::optional<MultiPoly> divide_exact(const MultiPoly& rhs) const;

    /// Full evaluation; every symbol present must be assigned.
    BigRat eval(const std::map<SymId, BigRat>& assign) const;

    /// Partial substitution of one symbol.
    MultiPoly substitute(SymId s, const BigRat& value) const;

    std::string to_string() const;

    const std::map<Monomial, BigRat>& terms() const { return terms_; }
    void add_term(const Monomial& m, const BigRat& c);  // accumulate, drop zeros

  private:
    std::map<Monomial, BigRat> terms_;
};

/// GCD in Q[symbols], normalized monic under the monomial order.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

/// View of p as univariate in v: coefficient list over the other symbols.
std::vector<MultiPoly> univariate_coeffs(const MultiPoly& p, SymId v);

/// GCD of a coefficient list (zero entries skipped).
MultiPoly poly_content(const std::vector<MultiPoly>& coeffs);

/// Element of the parameter field k0(Theta): a reduced fraction of two
/// multivariate polynomials.  Canonical form: numerator and denominator
/// coprime, denominator's leading coefficient equal to 1, so structural
/// equality decides field equality.
class ParamScalar {
  public:
    ParamScalar() : num_(), den_(BigRat(1)) {}                  // zero
    ParamScalar(const BigRat& c) : num_(c), den_(BigRat(1)) {}  // constant
    ParamScalar(long n) : num_(BigRat(n)), den_(BigRat(1)) {}
    ParamScalar(const MultiPoly& num, const MultiPoly& den);
    static ParamScalar symbol(const std::string& name);
    static ParamScalar symbol(SymId s);

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;

    ParamScalar operator+(const ParamScalar& rhs) const;
    ParamScalar operator-(const ParamScalar& rhs) const;
    ParamScalar operator*(const ParamScalar& rhs) const;
    ParamScalar operator/(const ParamScalar& rhs) const;  // throws on zero divisor
    ParamScalar operator-() const;
    bool operator==(const ParamScalar& rhs) const {
        return num_ == rhs.num_ && den_ == rhs.den_;
    }
    bool operator!=(const ParamScalar& rhs) const { return !(*this == rhs); }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }

    /// nullopt when the denominator vanishes at the assignment.
    std::optional<BigRat> eval(const std::map<SymId, BigRat>& assign) const;

    ParamScalar substitute(SymId s, const BigRat& value) const;

    /// Exact rational value when parameter-free, nullopt otherwise.
    std::optional<BigRat> to_rat() const;

    void collect_symbols(std::set<SymId>& out) const;
    bool is_constant() const;

    std::string to_string() const;

  private:
    void normalize();
    MultiPoly num_, den_;
};

}  // namespace opcalc

#endif
