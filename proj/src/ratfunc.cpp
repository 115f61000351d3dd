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

#include "opcalc/ratfunc.hpp"

#include <stdexcept>

namespace opcalc {

RatFunc::RatFunc(const SPoly& num, const SPoly& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw std::invalid_argument("RatFunc: zero denominator");
    if (num_.is_zero()) {
        den_ = SPoly(ParamScalar(1));
        return;
    }
    SPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divrem(g).first;
        den_ = den_.divrem(g).first;
    }
    ParamScalar lc = den_.leading();
    if (!lc.is_one()) {
        ParamScalar inv = ParamScalar(1) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RatFunc RatFunc::s_power(int k) {
    if (k >= 0) return RatFunc(SPoly::s_power(static_cast<unsigned>(k)), SPoly(ParamScalar(1)));
    return RatFunc(SPoly(ParamScalar(1)), SPoly::s_power(static_cast<unsigned>(-k)));
}

bool RatFunc::is_one() const {
    return den_.degree() == 0 && num_.degree() == 0 && !num_.is_zero() &&
           num_.coeff(0).is_one() && den_.coeff(0).is_one();
}

RatFunc RatFunc::operator+(const RatFunc& rhs) const {
    return RatFunc(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

RatFunc RatFunc::operator-(const RatFunc& rhs) const {
    return RatFunc(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

RatFunc RatFunc::operator*(const RatFunc& rhs) const {
    if (is_zero() || rhs.is_zero()) return RatFunc();
    return RatFunc(num_ * rhs.num_, den_ * rhs.den_);
}

RatFunc RatFunc::operator/(const RatFunc& rhs) const {
    if (rhs.is_zero()) throw std::domain_error("RatFunc: division by zero");
    if (is_zero()) return RatFunc();
    return RatFunc(num_ * rhs.den_, den_ * rhs.num_);
}

RatFunc RatFunc::operator-() const {
    RatFunc out = *this;
    out.num_ = -out.num_;
    return out;
}

RatFunc RatFunc::derivative() const {
    if (is_zero()) return RatFunc();
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

std::optional<BigRat> RatFunc::eval(const BigRat& s_value,
                                    const std::map<SymId, BigRat>& params) const {
    ParamScalar s{BigRat(s_value)};
    ParamScalar d = den_.eval(s);
    auto dv = d.eval(params);
    if (!dv || *dv == 0) return std::nullopt;
    auto nv = num_.eval(s).eval(params);
    if (!nv) return std::nullopt;
    return *nv / *dv;
}

RatFunc RatFunc::substitute(SymId sym, const BigRat& value) const {
    SPoly d = den_.substitute(sym, value);
    if (d.is_zero()) throw std::domain_error("substitution annihilates a denominator");
    return RatFunc(num_.substitute(sym, value), d);
}

void RatFunc::collect_symbols(std::set<SymId>& out) const {
    num_.collect_symbols(out);
    den_.collect_symbols(out);
}

std::string RatFunc::to_string(const std::string& var) const {
    if (den_.degree() == 0 && !den_.is_zero() && den_.coeff(0).is_one())
        return num_.to_string(var);
    return "(" + num_.to_string(var) + ") / (" + den_.to_string(var) + ")";
}

}  // namespace opcalc
