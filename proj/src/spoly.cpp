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

#include "opcalc/spoly.hpp"

#include <sstream>
#include <stdexcept>

namespace opcalc {

SPoly::SPoly(const ParamScalar& c) {
    if (!c.is_zero()) c_.push_back(c);
}

SPoly::SPoly(std::vector<ParamScalar> coeffs) : c_(std::move(coeffs)) { trim(); }

SPoly SPoly::s_power(unsigned k, const ParamScalar& c) {
    SPoly out;
    if (c.is_zero()) return out;
    out.c_.assign(k + 1, ParamScalar());
    out.c_[k] = c;
    return out;
}

void SPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const ParamScalar& SPoly::coeff(unsigned k) const {
    static const ParamScalar zero;
    if (k >= c_.size()) return zero;
    return c_[k];
}

const ParamScalar& SPoly::leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
}

SPoly SPoly::operator+(const SPoly& rhs) const {
    std::vector<ParamScalar> out(std::max(c_.size(), rhs.c_.size()));
    for (size_t i = 0; i < out.size(); ++i) out[i] = coeff(i) + rhs.coeff(i);
    return SPoly(std::move(out));
}

SPoly SPoly::operator-(const SPoly& rhs) const {
    std::vector<ParamScalar> out(std::max(c_.size(), rhs.c_.size()));
    for (size_t i = 0; i < out.size(); ++i) out[i] = coeff(i) - rhs.coeff(i);
    return SPoly(std::move(out));
}

SPoly SPoly::operator*(const SPoly& rhs) const {
    if (is_zero() || rhs.is_zero()) return SPoly();
    std::vector<ParamScalar> out(c_.size() + rhs.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < rhs.c_.size(); ++j) out[i + j] = out[i + j] + c_[i] * rhs.c_[j];
    return SPoly(std::move(out));
}

SPoly SPoly::operator-() const {
    SPoly out = *this;
    for (auto& c : out.c_) c = -c;
    return out;
}

SPoly SPoly::scaled(const ParamScalar& c) const {
    if (c.is_zero()) return SPoly();
    SPoly out = *this;
    for (auto& x : out.c_) x = x * c;
    return out;
}

SPoly SPoly::derivative() const {
    if (c_.size() <= 1) return SPoly();
    std::vector<ParamScalar> out(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * ParamScalar(static_cast<long>(k));
    return SPoly(std::move(out));
}

SPoly SPoly::monic() const {
    if (is_zero()) return *this;
    return scaled(ParamScalar(1) / leading());
}

ParamScalar SPoly::eval(const ParamScalar& s_value) const {
    ParamScalar acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s_value + *it;
    return acc;
}

SPoly SPoly::substitute(SymId sym, const BigRat& value) const {
    std::vector<ParamScalar> out(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = c_[i].substitute(sym, value);
    return SPoly(std::move(out));
}

void SPoly::collect_symbols(std::set<SymId>& out) const {
    for (const auto& c : c_) c.collect_symbols(out);
}

std::pair<SPoly, SPoly> SPoly::divrem(const SPoly& rhs) const {
    if (rhs.is_zero()) throw std::domain_error("SPoly division by zero");
    SPoly rem = *this;
    SPoly quot;
    const int db = rhs.degree();
    while (rem.degree() >= db) {
        unsigned shift = static_cast<unsigned>(rem.degree() - db);
        ParamScalar qc = rem.leading() / rhs.leading();
        SPoly term = SPoly::s_power(shift, qc);
        quot = quot + term;
        rem = rem - rhs * term;
    }
    return {quot, rem};
}

std::string SPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const ParamScalar& c = coeff(static_cast<unsigned>(k));
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        bool unit = c.is_one();
        if (!unit || k == 0) os << c.to_string();
        if (k > 0) {
            if (!unit) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

namespace {

SymId s_marker() {
    static const SymId id = SymbolTable::intern("@s");
    return id;
}

// clear coefficient denominators: p times a parameter polynomial, written
// as an element of Q[params, @s]
MultiPoly cleared(const SPoly& p) {
    MultiPoly common(BigRat(1));
    for (int k = 0; k <= p.degree(); ++k) {
        const auto& den = p.coeff(static_cast<unsigned>(k)).den();
        if (p.coeff(static_cast<unsigned>(k)).is_zero()) continue;
        MultiPoly g = gcd(common, den);
        common = common * *den.divide_exact(g);
    }
    MultiPoly out;
    for (int k = 0; k <= p.degree(); ++k) {
        const ParamScalar& c = p.coeff(static_cast<unsigned>(k));
        if (c.is_zero()) continue;
        MultiPoly scale = *common.divide_exact(c.den());
        out = out + c.num() * scale *
                        MultiPoly(BigRat(1), Monomial(s_marker(), static_cast<unsigned>(k)));
    }
    return out;
}

}  // namespace

// GCD over the fraction field k0(Theta)[s].  Work in Q[Theta, s] with the
// primitive-PRS gcd, then strip the parameter-only content, since parameter
// polynomials are units of the coefficient field.
SPoly gcd(const SPoly& a, const SPoly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.degree() == 0 || b.degree() == 0) return SPoly(ParamScalar(1));

    MultiPoly g = gcd(cleared(a), cleared(b));
    std::vector<MultiPoly> coeffs = univariate_coeffs(g, s_marker());
    MultiPoly cont = poly_content(coeffs);
    std::vector<ParamScalar> out(coeffs.size());
    for (size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k].is_zero()) continue;
        out[k] = ParamScalar(*coeffs[k].divide_exact(cont), MultiPoly(BigRat(1)));
    }
    return SPoly(std::move(out)).monic();
}

}  // namespace opcalc
