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

#include "opcalc/param_field.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace opcalc {

BigRat rat_from_double(double x) {
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

double rat_to_double(const BigRat& q) { return q.get_d(); }

BigRat rat_from_string(const std::string& s) {
    mpq_class q(s);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const BigRat& q) { return q.get_str(); }

namespace {

struct Registry {
    std::mutex mu;
    std::vector<std::string> names;
    std::map<std::string, SymId> ids;
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

SymId SymbolTable::intern(const std::string& name) {
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    auto it = r.ids.find(name);
    if (it != r.ids.end()) return it->second;
    SymId id = static_cast<SymId>(r.names.size());
    r.names.push_back(name);
    r.ids.emplace(name, id);
    return id;
}

const std::string& SymbolTable::name(SymId id) {
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    return r.names.at(id);
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(SymId s, unsigned e) {
    if (e > 0) factors_.push_back({s, e});
}

unsigned Monomial::degree_of(SymId s) const {
    for (const auto& [sym, e] : factors_)
        if (sym == s) return e;
    return 0;
}

unsigned Monomial::total_degree() const {
    unsigned d = 0;
    for (const auto& [sym, e] : factors_) d += e;
    return d;
}

bool Monomial::divides(const Monomial& other) const {
    for (const auto& [sym, e] : factors_)
        if (other.degree_of(sym) < e) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& rhs) const {
    Monomial out;
    auto a = factors_.begin(), b = rhs.factors_.begin();
    while (a != factors_.end() || b != rhs.factors_.end()) {
        if (b == rhs.factors_.end() || (a != factors_.end() && a->first < b->first)) {
            out.factors_.push_back(*a++);
        } else if (a == factors_.end() || b->first < a->first) {
            out.factors_.push_back(*b++);
        } else {
            out.factors_.push_back({a->first, a->second + b->second});
            ++a, ++b;
        }
    }
    return out;
}

Monomial Monomial::divide(const Monomial& rhs) const {
    Monomial out;
    for (const auto& [sym, e] : factors_) {
        unsigned r = rhs.degree_of(sym);
        if (r > e) throw std::invalid_argument("monomial division not exact");
        if (e - r > 0) out.factors_.push_back({sym, e - r});
    }
    return out;
}

bool Monomial::operator<(const Monomial& rhs) const {
    unsigned da = total_degree(), db = rhs.total_degree();
    if (da != db) return da < db;
    // same degree: lexicographic, smaller SymId more significant
    auto a = factors_.begin(), b = rhs.factors_.begin();
    while (a != factors_.end() && b != rhs.factors_.end()) {
        if (a->first != b->first) return a->first > b->first;  // missing symbol = exp 0
        if (a->second != b->second) return a->second < b->second;
        ++a, ++b;
    }
    return false;  // equal
}

std::string Monomial::to_string() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [sym, e] : factors_) {
        if (!first) os << "*";
        os << SymbolTable::name(sym);
        if (e > 1) os << "^" << e;
        first = false;
    }
    return os.str();
}

// --------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(const BigRat& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

MultiPoly::MultiPoly(const BigRat& c, const Monomial& m) {
    if (c != 0) terms_.emplace(m, c);
}

MultiPoly MultiPoly::symbol(SymId s) { return MultiPoly(BigRat(1), Monomial(s)); }

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

const BigRat* MultiPoly::constant_value() const {
    static const BigRat zero(0);
    if (terms_.empty()) return &zero;
    if (terms_.size() == 1 && terms_.begin()->first.is_one()) return &terms_.begin()->second;
    return nullptr;
}

void MultiPoly::add_term(const Monomial& m, const BigRat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator+(const MultiPoly& rhs) const {
    MultiPoly out = *this;
    for (const auto& [m, c] : rhs.terms_) out.add_term(m, c);
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& rhs) const {
    MultiPoly out = *this;
    for (const auto& [m, c] : rhs.terms_) out.add_term(m, -c);
    return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& rhs) const {
    MultiPoly out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : rhs.terms_) out.add_term(ma * mb, ca * cb);
    return out;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

unsigned MultiPoly::total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

unsigned MultiPoly::degree_in(SymId s) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree_of(s));
    return d;
}

void MultiPoly::collect_symbols(std::set<SymId>& out) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [sym, e] : m.factors()) out.insert(sym);
}

const std::pair<const Monomial, BigRat>& MultiPoly::leading() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return *terms_.rbegin();
}

MultiPoly MultiPoly::scaled(const BigRat& c) const {
    MultiPoly out;
    if (c == 0) return out;
    for (const auto& [m, coeff] : terms_) out.terms_.emplace(m, coeff * c);
    return out;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& rhs) const {
    if (rhs.is_zero()) return std::nullopt;
    MultiPoly rem = *this;
    MultiPoly quot;
    const auto& [lm, lc] = rhs.leading();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = rem.leading();
        if (!lm.divides(rm)) return std::nullopt;
        Monomial qm = rm.divide(lm);
        BigRat qc = rc / lc;
        quot.add_term(qm, qc);
        rem = rem - rhs * MultiPoly(qc, qm);
    }
    return quot;
}

BigRat MultiPoly::eval(const std::map<SymId, BigRat>& assign) const {
    BigRat acc(0);
    for (const auto& [m, c] : terms_) {
        BigRat v = c;
        for (const auto& [sym, e] : m.factors()) {
            auto it = assign.find(sym);
            if (it == assign.end())
                throw std::invalid_argument("unassigned symbol " + SymbolTable::name(sym));
            for (unsigned i = 0; i < e; ++i) v *= it->second;
        }
        acc += v;
    }
    return acc;
}

MultiPoly MultiPoly::substitute(SymId s, const BigRat& value) const {
    MultiPoly out;
    for (const auto& [m, c] : terms_) {
        unsigned e = m.degree_of(s);
        if (e == 0) {
            out.add_term(m, c);
            continue;
        }
        BigRat scale = c;
        for (unsigned i = 0; i < e; ++i) scale *= value;
        Monomial rest;
        for (const auto& [sym, ee] : m.factors())
            if (sym != s) rest = rest * Monomial(sym, ee);
        out.add_term(rest, scale);
    }
    return out;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const BigRat& c = it->second;
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        BigRat a = abs(c);
        if (it->first.is_one()) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << it->first.to_string();
        }
        first = false;
    }
    return os.str();
}

// ------------------------------------------------------------------- gcd

namespace {

// view of a MultiPoly as univariate in `v` with MultiPoly coefficients
std::vector<MultiPoly> coeffs_in(const MultiPoly& p, SymId v) {
    std::vector<MultiPoly> out(p.degree_in(v) + 1);
    for (const auto& [m, c] : p.terms()) {
        unsigned e = m.degree_of(v);
        Monomial rest;
        for (const auto& [sym, ee] : m.factors())
            if (sym != v) rest = rest * Monomial(sym, ee);
        out[e].add_term(rest, c);
    }
    return out;
}

MultiPoly assemble(const std::vector<MultiPoly>& coeffs, SymId v) {
    MultiPoly out;
    for (size_t e = 0; e < coeffs.size(); ++e) {
        MultiPoly pe = coeffs[e] * MultiPoly(BigRat(1), Monomial(v, static_cast<unsigned>(e)));
        out = out + pe;
    }
    return out;
}

int deg_u(const std::vector<MultiPoly>& c) {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (!c[i].is_zero()) return i;
    return -1;
}

MultiPoly content_of(const std::vector<MultiPoly>& c) {
    MultiPoly g;
    for (const auto& p : c)
        if (!p.is_zero()) g = g.is_zero() ? p : gcd(g, p);
    return g;
}

std::vector<MultiPoly> divide_all(const std::vector<MultiPoly>& c, const MultiPoly& d) {
    std::vector<MultiPoly> out(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) continue;
        auto q = c[i].divide_exact(d);
        if (!q) throw std::logic_error("content division failed");
        out[i] = *q;
    }
    return out;
}

// gcd of numerators over lcm of denominators: dividing by it leaves
// coprime integer coefficients.  Keeps pseudo-remainder growth in check.
BigRat rat_content(const std::vector<MultiPoly>& c) {
    mpz_class g(0), l(1);
    for (const auto& p : c) {
        for (const auto& [m, q] : p.terms()) {
            mpz_class num = abs(q.get_num());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
            mpz_class den = q.get_den();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
    }
    if (g == 0) return BigRat(1);
    return BigRat(g) / BigRat(l);
}

void strip_rat_content(std::vector<MultiPoly>& c) {
    BigRat rc = rat_content(c);
    if (rc == 1) return;
    BigRat inv = 1 / rc;
    for (auto& p : c) p = p.scaled(inv);
}

// pseudo-remainder of a by b (univariate in v, coefficients MultiPoly)
std::vector<MultiPoly> prem(std::vector<MultiPoly> a, const std::vector<MultiPoly>& b) {
    int db = deg_u(b);
    const MultiPoly& lb = b[db];
    int da = deg_u(a);
    while (da >= db && da >= 0) {
        MultiPoly la = a[da];
        // a = lb*a - la * v^(da-db) * b
        std::vector<MultiPoly> next(std::max<size_t>(a.size(), 1));
        for (int i = 0; i <= da; ++i) next[i] = a[i] * lb;
        for (int i = 0; i <= db; ++i) next[i + da - db] = next[i + da - db] - la * b[i];
        a = std::move(next);
        int nd = deg_u(a);
        if (nd >= da) throw std::logic_error("pseudo-division failed to reduce degree");
        da = nd;
    }
    a.resize(da + 1 >= 1 ? da + 1 : 0);
    return a;
}

MultiPoly make_monic(const MultiPoly& p) {
    if (p.is_zero()) return p;
    const BigRat& lc = p.leading().second;
    return p.scaled(BigRat(1) / lc);
}

}  // namespace

std::vector<MultiPoly> univariate_coeffs(const MultiPoly& p, SymId v) {
    return coeffs_in(p, v);
}

MultiPoly poly_content(const std::vector<MultiPoly>& coeffs) { return content_of(coeffs); }

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    if (a.is_constant() || b.is_constant()) return MultiPoly(BigRat(1));

    std::set<SymId> syms;
    a.collect_symbols(syms);
    b.collect_symbols(syms);
    SymId v = *syms.rbegin();

    auto ca = coeffs_in(a, v);
    auto cb = coeffs_in(b, v);
    MultiPoly cont_a = content_of(ca);
    MultiPoly cont_b = content_of(cb);
    auto pa = divide_all(ca, cont_a);
    auto pb = divide_all(cb, cont_b);
    strip_rat_content(pa);
    strip_rat_content(pb);
    MultiPoly cont_g = gcd(cont_a, cont_b);

    // primitive PRS
    if (deg_u(pa) < deg_u(pb)) std::swap(pa, pb);
    while (deg_u(pb) >= 0) {
        auto r = prem(pa, pb);
        pa = std::move(pb);
        if (deg_u(r) < 0) {
            pb.clear();
            break;
        }
        MultiPoly cont_r = content_of(r);
        pb = divide_all(r, cont_r);
        strip_rat_content(pb);
    }
    MultiPoly g_pp = assemble(pa, v);
    MultiPoly cont_gpp = content_of(coeffs_in(g_pp, v));
    auto primitive = g_pp.divide_exact(cont_gpp);
    if (!primitive) throw std::logic_error("primitive part extraction failed");
    return make_monic(cont_g * *primitive);
}

// ------------------------------------------------------------- ParamScalar

ParamScalar::ParamScalar(const MultiPoly& num, const MultiPoly& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw std::invalid_argument("ParamScalar: zero denominator");
    normalize();
}

ParamScalar ParamScalar::symbol(const std::string& name) {
    return symbol(SymbolTable::intern(name));
}

ParamScalar ParamScalar::symbol(SymId s) {
    ParamScalar out;
    out.num_ = MultiPoly::symbol(s);
    out.den_ = MultiPoly(BigRat(1));
    return out;
}

bool ParamScalar::is_one() const {
    const BigRat* n = num_.constant_value();
    const BigRat* d = den_.constant_value();
    return n && d && *n == 1 && *d == 1;
}

void ParamScalar::normalize() {
    if (num_.is_zero()) {
        den_ = MultiPoly(BigRat(1));
        return;
    }
    MultiPoly g = gcd(num_, den_);
    if (!g.is_constant()) {
        num_ = *num_.divide_exact(g);
        den_ = *den_.divide_exact(g);
    }
    const BigRat lc = den_.leading().second;
    if (lc != 1) {
        BigRat inv = BigRat(1) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

ParamScalar ParamScalar::operator+(const ParamScalar& rhs) const {
    return ParamScalar(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

ParamScalar ParamScalar::operator-(const ParamScalar& rhs) const {
    return ParamScalar(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

ParamScalar ParamScalar::operator*(const ParamScalar& rhs) const {
    if (is_zero() || rhs.is_zero()) return ParamScalar();
    return ParamScalar(num_ * rhs.num_, den_ * rhs.den_);
}

ParamScalar ParamScalar::operator/(const ParamScalar& rhs) const {
    if (rhs.is_zero()) throw std::domain_error("ParamScalar: division by zero");
    if (is_zero()) return ParamScalar();
    return ParamScalar(num_ * rhs.den_, den_ * rhs.num_);
}

ParamScalar ParamScalar::operator-() const {
    ParamScalar out = *this;
    out.num_ = -out.num_;
    return out;
}

std::optional<BigRat> ParamScalar::eval(const std::map<SymId, BigRat>& assign) const {
    BigRat d = den_.eval(assign);
    if (d == 0) return std::nullopt;
    return num_.eval(assign) / d;
}

ParamScalar ParamScalar::substitute(SymId s, const BigRat& value) const {
    MultiPoly d = den_.substitute(s, value);
    if (d.is_zero()) throw std::domain_error("substitution hits a pole of a coefficient");
    return ParamScalar(num_.substitute(s, value), d);
}

std::optional<BigRat> ParamScalar::to_rat() const {
    const BigRat* n = num_.constant_value();
    const BigRat* d = den_.constant_value();
    if (n && d) return *n / *d;
    return std::nullopt;
}

void ParamScalar::collect_symbols(std::set<SymId>& out) const {
    num_.collect_symbols(out);
    den_.collect_symbols(out);
}

bool ParamScalar::is_constant() const { return num_.is_constant() && den_.is_constant(); }

std::string ParamScalar::to_string() const {
    const BigRat* d = den_.constant_value();
    if (d && *d == 1) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace opcalc
