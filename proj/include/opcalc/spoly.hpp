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

#ifndef OPCALC_SPOLY_HPP
#define OPCALC_SPOLY_HPP

#include <utility>
#include <vector>

#include "opcalc/param_field.hpp"

namespace opcalc {

/// Dense polynomial in the operational variable s over the parameter field.
class SPoly {
  public:
    SPoly() = default;
    SPoly(const ParamScalar& c);                      // constant
    explicit SPoly(std::vector<ParamScalar> coeffs);  // ascending powers
    static SPoly s_power(unsigned k, const ParamScalar& c = ParamScalar(1));

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const ParamScalar& coeff(unsigned k) const;  // 0 beyond degree
    const ParamScalar& leading() const;

    SPoly operator+(const SPoly& rhs) const;
    SPoly operator-(const SPoly& rhs) const;
    SPoly operator*(const SPoly& rhs) const;
    SPoly operator-() const;
    SPoly scaled(const ParamScalar& c) const;
    bool operator==(const SPoly& rhs) const { return c_ == rhs.c_; }

    SPoly derivative() const;  // d/ds
    SPoly monic() const;
    ParamScalar eval(const ParamScalar& s_value) const;
    SPoly substitute(SymId sym, const BigRat& value) const;
    void collect_symbols(std::set<SymId>& out) const;

    /// Euclidean division: this = q*rhs + r with deg r < deg rhs.
    std::pair<SPoly, SPoly> divrem(const SPoly& rhs) const;

    std::string to_string(const std::string& var = "s") const;

  private:
    void trim();
    std::vector<ParamScalar> c_;  // c_[k] multiplies s^k
};

/// Monic GCD in k0(Theta)[s].
SPoly gcd(const SPoly& a, const SPoly& b);

}  // namespace opcalc

#endif
