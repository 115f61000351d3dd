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

#ifndef OPCALC_RATFUNC_HPP
#define OPCALC_RATFUNC_HPP

#include "opcalc/spoly.hpp"

namespace opcalc {

/// Rational function of s over the parameter field, kept in lowest terms
/// with a monic denominator, so equal values compare structurally equal.
class RatFunc {
  public:
    RatFunc() : num_(), den_(ParamScalar(1)) {}  // zero
    RatFunc(const ParamScalar& c) : num_(c), den_(ParamScalar(1)) {}
    RatFunc(long n) : num_(ParamScalar(n)), den_(ParamScalar(1)) {}
    RatFunc(const SPoly& num, const SPoly& den);
    static RatFunc s_power(int k);  // s^k, negative k allowed

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_polynomial() const { return den_.degree() == 0; }
    const SPoly& num() const { return num_; }
    const SPoly& den() const { return den_; }

    RatFunc operator+(const RatFunc& rhs) const;
    RatFunc operator-(const RatFunc& rhs) const;
    RatFunc operator*(const RatFunc& rhs) const;
    RatFunc operator/(const RatFunc& rhs) const;
    RatFunc operator-() const;
    bool operator==(const RatFunc& rhs) const {
        return num_ == rhs.num_ && den_ == rhs.den_;
    }
    bool operator!=(const RatFunc& rhs) const { return !(*this == rhs); }

    RatFunc derivative() const;  // d/ds, quotient rule

    /// Evaluate at a rational point of (s, parameters); nullopt at poles.
    std::optional<BigRat> eval(const BigRat& s_value,
                               const std::map<SymId, BigRat>& params) const;

    RatFunc substitute(SymId sym, const BigRat& value) const;
    void collect_symbols(std::set<SymId>& out) const;

    std::string to_string(const std::string& var = "s") const;

  private:
    SPoly num_, den_;
};

}  // namespace opcalc

#endif
