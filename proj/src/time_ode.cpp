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

#include "opcalc/time_ode.hpp"

#include <sstream>
#include <stdexcept>

namespace opcalc {

TimeOde::TimeOde(std::vector<OdeTerm> terms, std::vector<ParamScalar> initial_values)
    : terms_(std::move(terms)), initial_values_(std::move(initial_values)) {
    if (terms_.empty()) throw std::invalid_argument("TimeOde: no terms");
    if (initial_values_.size() < max_order())
        throw std::invalid_argument("TimeOde: initial values must cover orders 0..max-1");
}

unsigned TimeOde::max_order() const {
    unsigned m = 0;
    for (const auto& t : terms_) m = std::max(m, t.d_order);
    return m;
}

TimeOde TimeOde::scaled(const ParamScalar& c) const {
    TimeOde out = *this;
    for (auto& t : out.terms_) t.c = t.c * c;
    return out;
}

TimeOde TimeOde::operator+(const TimeOde& rhs) const {
    if (initial_values_.size() < rhs.initial_values_.size()) return rhs + *this;
    TimeOde out = *this;
    for (const auto& t : rhs.terms_) out.terms_.push_back(t);
    return out;
}

OperationalRelation OperationalRelation::substitute(SymId sym, const BigRat& value) const {
    OperationalRelation out;
    out.lhs = lhs.substitute(sym, value);
    out.rhs = rhs.substitute(sym, value);
    std::set<SymId> syms;
    out.lhs.collect_symbols(syms);
    out.rhs.collect_symbols(syms);
    out.params.assign(syms.begin(), syms.end());
    return out;
}

std::string OperationalRelation::to_string() const {
    return "[" + lhs.to_string() + "] x = " + rhs.to_string();
}

OperationalRelation to_operational(const TimeOde& ode) {
    DiffOp lhs;
    SPoly rhs;
    const auto& iv = ode.initial_values();
    for (const auto& term : ode.terms()) {
        // operator part: c (-D)^m s^nu
        DiffOp base = DiffOp(RatFunc(SPoly::s_power(term.d_order), SPoly(ParamScalar(1))));
        DiffOp op = dds_power(term.t_pow) * base;
        if (term.t_pow % 2 == 1) op = -op;
        lhs = lhs + op.scaled(RatFunc(term.c));

        // forcing part: c (-1)^m d^m/ds^m of the initial-value polynomial
        if (term.d_order > 0) {
            std::vector<ParamScalar> c(term.d_order);
            for (unsigned i = 0; i < term.d_order; ++i)
                c[term.d_order - 1 - i] = iv[i];  // s^{nu-1-i} carries z^(i)(0)
            SPoly icp((std::vector<ParamScalar>(c)));
            for (unsigned m = 0; m < term.t_pow; ++m) icp = icp.derivative();
            if (term.t_pow % 2 == 1) icp = -icp;
            rhs = rhs + icp.scaled(term.c);
        }
    }
    OperationalRelation rel;
    rel.lhs = lhs;
    rel.rhs = rhs;
    std::set<SymId> syms;
    rel.lhs.collect_symbols(syms);
    rel.rhs.collect_symbols(syms);
    rel.params.assign(syms.begin(), syms.end());
    return rel;
}

DiffOp homogenize(const OperationalRelation& rel) {
    int d = rel.rhs.degree();
    unsigned k = d < 0 ? 0u : static_cast<unsigned>(d) + 1u;
    return dds_power(k) * rel.lhs;
}

std::string MinimalEquation::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (unsigned i = 0; i < q.size(); ++i) {
        if (q[i].is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << q[i].to_string() << ")*x";
        if (i > 0) os << "^(" << i << ")";
        first = false;
    }
    os << " = " << p.to_string();
    return os.str();
}

namespace {

MinimalEquation normalize_equation(std::vector<SPoly> q, SPoly p) {
    while (q.size() > 1 && q.back().is_zero()) q.pop_back();
    if (q.empty() || q.back().is_zero())
        throw std::invalid_argument("equation must involve the signal");

    // make the whole tuple coprime
    SPoly g = p;
    for (const auto& qi : q) g = g.is_zero() ? qi : gcd(g, qi);
    if (g.degree() > 0) {
        for (auto& qi : q)
            if (!qi.is_zero()) qi = qi.divrem(g).first;
        if (!p.is_zero()) p = p.divrem(g).first;
    }

    // designated normalization: leading coefficient of the top q equals 1
    ParamScalar lead = q.back().leading();
    if (!lead.is_one()) {
        ParamScalar inv = ParamScalar(1) / lead;
        for (auto& qi : q) qi = qi.scaled(inv);
        p = p.scaled(inv);
    }
    MinimalEquation me;
    me.q = std::move(q);
    me.p = std::move(p);
    return me;
}

}  // namespace

MinimalEquation minimal_equation(const RatFunc& xhat) {
    if (xhat.is_zero()) throw std::invalid_argument("minimal_equation: zero signal");
    // rational transform: q0 x = p already in lowest terms
    return normalize_equation({xhat.den()}, xhat.num());
}

MinimalEquation relation_as_equation(const OperationalRelation& rel) {
    if (rel.lhs.is_zero()) throw std::invalid_argument("relation has no operator side");
    // common denominator of the operator coefficients
    SPoly common(ParamScalar(1));
    for (int j = 0; j <= rel.lhs.order(); ++j) {
        const RatFunc& r = rel.lhs.coeff(static_cast<unsigned>(j));
        if (r.is_zero()) continue;
        SPoly g = gcd(common, r.den());
        common = common * r.den().divrem(g).first;
    }
    std::vector<SPoly> q(static_cast<size_t>(rel.lhs.order()) + 1);
    for (int j = 0; j <= rel.lhs.order(); ++j) {
        const RatFunc& r = rel.lhs.coeff(static_cast<unsigned>(j));
        if (r.is_zero()) continue;
        q[j] = r.num() * common.divrem(r.den()).first;
    }
    SPoly p = rel.rhs * common;
    return normalize_equation(std::move(q), std::move(p));
}

MinimalEquation premultiply(const MinimalEquation& me, const SPoly& m) {
    if (m.is_zero()) throw std::invalid_argument("premultiply: zero multiplier");
    MinimalEquation out;
    out.q.reserve(me.q.size());
    for (const auto& qi : me.q) out.q.push_back(qi * m);
    out.p = me.p * m;
    // deliberately NOT re-normalized: the common factor is the point
    ParamScalar lead = out.q.back().leading();
    if (!lead.is_one()) {
        ParamScalar inv = ParamScalar(1) / lead;
        for (auto& qi : out.q) qi = qi.scaled(inv);
        out.p = out.p.scaled(inv);
    }
    return out;
}

ModulePtr module_from_equation(const MinimalEquation& me) {
    const unsigned n = me.order();
    RatFunc qn(me.q.back(), SPoly(ParamScalar(1)));
    if (n == 0) {
        RatFunc x(me.p, me.q[0]);
        return module_for_rational(x);
    }
    RatFunc rule_const = RatFunc(me.p, SPoly(ParamScalar(1))) / qn;
    std::vector<RatFunc> rule_sig(n);
    for (unsigned i = 0; i < n; ++i) {
        if (me.q[i].is_zero()) continue;
        rule_sig[i] = -RatFunc(me.q[i], SPoly(ParamScalar(1))) / qn;
    }
    return std::make_shared<AnnihilatorModule>(n, rule_const, std::move(rule_sig));
}

}  // namespace opcalc
