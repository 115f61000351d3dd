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

#include "opcalc/identifiability.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace opcalc {

CoefficientForm to_coefficient_form(const MinimalEquation& me) {
    CoefficientForm cf;
    for (unsigned nu = 0; nu < me.q.size(); ++nu) {
        const SPoly& qn = me.q[nu];
        for (int mu = 0; mu <= qn.degree(); ++mu) {
            const ParamScalar& a = qn.coeff(static_cast<unsigned>(mu));
            if (!a.is_zero()) cf.sig.push_back({a, static_cast<unsigned>(mu), nu});
        }
    }
    for (int k = 0; k <= me.p.degree(); ++k) {
        const ParamScalar& b = me.p.coeff(static_cast<unsigned>(k));
        if (!b.is_zero()) cf.force.push_back({b, static_cast<unsigned>(k)});
    }
    if (cf.sig.empty()) throw std::invalid_argument("coefficient form without signal terms");
    return cf;
}

MMatrix::MMatrix(const CoefficientForm& cf, ModulePtr module)
    : order_(cf.matrix_order()), module_(std::move(module)) {
    // row 0: the column functions themselves
    std::vector<ModuleElement> row;
    row.reserve(order_);
    for (const auto& t : cf.sig) {
        RatFunc spow(SPoly::s_power(t.mu), SPoly(ParamScalar(1)));
        row.push_back(reduce_signal_derivative(module_, t.nu).scaled(spow));
    }
    for (const auto& t : cf.force) {
        std::vector<RatFunc> coords(module_->dimension());
        coords[0] = RatFunc(SPoly::s_power(t.kappa), SPoly(ParamScalar(1)));
        row.push_back(ModuleElement(module_, std::move(coords)));
    }
    rows_.push_back(std::move(row));
    for (unsigned xi = 1; xi < order_; ++xi) {
        std::vector<ModuleElement> next;
        next.reserve(order_);
        for (const auto& e : rows_.back()) next.push_back(e.derivative());
        rows_.push_back(std::move(next));
    }
}

namespace {

BigRat random_rational(std::mt19937_64& rng, long bound) {
    std::uniform_int_distribution<long> num(1, bound);
    std::uniform_int_distribution<long> den(1, bound);
    std::uniform_int_distribution<int> sign(0, 1);
    BigRat q(num(rng), den(rng));
    q.canonicalize();
    return sign(rng) ? q : BigRat(-q);
}

struct Specialization {
    BigRat s_value;
    std::map<SymId, BigRat> params;
    std::vector<BigRat> basis;
};

std::set<SymId> matrix_symbols(const MMatrix& m) {
    std::set<SymId> syms;
    for (unsigned r = 0; r < m.order(); ++r)
        for (unsigned c = 0; c < m.order(); ++c)
            for (const auto& coord : m.at(r, c).coords()) coord.collect_symbols(syms);
    const auto& mod = *m.module();
    mod.rule_const().collect_symbols(syms);
    for (const auto& r : mod.rule_sig()) r.collect_symbols(syms);
    return syms;
}

// numeric image of the matrix at a random point; nullopt when a pole is hit
std::optional<std::vector<std::vector<BigRat>>> specialize(const MMatrix& m,
                                                           std::mt19937_64& rng, long bound) {
    Specialization sp;
    sp.s_value = random_rational(rng, bound);
    for (SymId sym : matrix_symbols(m)) sp.params[sym] = random_rational(rng, bound);
    for (unsigned i = 0; i < m.module()->order(); ++i)
        sp.basis.push_back(random_rational(rng, bound));

    std::vector<std::vector<BigRat>> out(m.order(), std::vector<BigRat>(m.order()));
    for (unsigned r = 0; r < m.order(); ++r)
        for (unsigned c = 0; c < m.order(); ++c) {
            auto v = m.at(r, c).eval(sp.s_value, sp.params, sp.basis);
            if (!v) return std::nullopt;
            out[r][c] = *v;
        }
    return out;
}

}  // namespace

unsigned rank_exact(std::vector<std::vector<BigRat>> a) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    unsigned rank = 0;
    size_t pr = 0;
    for (size_t pc = 0; pc < cols && pr < rows; ++pc) {
        size_t piv = pr;
        while (piv < rows && a[piv][pc] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[pr]);
        for (size_t r = pr + 1; r < rows; ++r) {
            if (a[r][pc] == 0) continue;
            BigRat f = a[r][pc] / a[pr][pc];
            for (size_t c = pc; c < cols; ++c) a[r][c] -= f * a[pr][c];
        }
        ++pr;
        ++rank;
    }
    return rank;
}

RankReport rank_of(const MMatrix& m, const RankOptions& opt) {
    RankReport report;
    report.order = m.order();
    std::map<unsigned, int> votes;
    int rounds = opt.votes;
    std::uint64_t next_seed = opt.seed;
    for (int round = 0; round < rounds; ++round) {
        std::uint64_t seed = next_seed++;
        std::mt19937_64 rng(seed);
        std::optional<std::vector<std::vector<BigRat>>> mat;
        int tries = 0;
        while (!mat) {
            mat = specialize(m, rng, opt.bound);
            if (!mat && ++tries > opt.max_pole_retries)
                throw std::runtime_error(
                    "rank: every specialization hit a pole; matrix entries may be degenerate");
            if (!mat) ++report.pole_retries;
        }
        report.seeds_used.push_back(seed);
        votes[rank_exact(std::move(*mat))]++;
        // disagreement at the end of the planned rounds widens the sample once
        if (round == rounds - 1 && votes.size() > 1 && rounds == opt.votes) rounds += opt.votes;
    }
    auto best = std::max_element(votes.begin(), votes.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    report.rank = best->first;
    report.probabilistic = true;
    return report;
}

RatFunc det_symbolic(const MMatrix& m) {
    if (m.module()->order() != 0)
        throw std::invalid_argument("symbolic determinant requires an order-0 module");
    const unsigned n = m.order();
    std::vector<std::vector<RatFunc>> a(n, std::vector<RatFunc>(n));
    for (unsigned r = 0; r < n; ++r)
        for (unsigned c = 0; c < n; ++c) a[r][c] = m.at(r, c).unit_coord();

    RatFunc det(1);
    bool negate = false;
    for (unsigned pc = 0; pc < n; ++pc) {
        unsigned piv = pc;
        while (piv < n && a[piv][pc].is_zero()) ++piv;
        if (piv == n) return RatFunc();  // singular
        if (piv != pc) {
            std::swap(a[piv], a[pc]);
            negate = !negate;
        }
        det = det * a[pc][pc];
        for (unsigned r = pc + 1; r < n; ++r) {
            if (a[r][pc].is_zero()) continue;
            RatFunc f = a[r][pc] / a[pc][pc];
            for (unsigned c = pc; c < n; ++c) a[r][c] = a[r][c] - f * a[pc][c];
        }
    }
    return negate ? -det : det;
}

std::vector<BigRat> kernel_vector(const MMatrix& m, std::uint64_t seed,
                                  unsigned normalize_index, const RankOptions& opt) {
    std::mt19937_64 rng(seed);
    std::optional<std::vector<std::vector<BigRat>>> mat;
    int tries = 0;
    while (!mat) {
        mat = specialize(m, rng, opt.bound);
        if (!mat && ++tries > opt.max_pole_retries)
            throw std::runtime_error("kernel: specializations keep hitting poles");
    }
    auto a = std::move(*mat);
    const size_t n = a.size();

    // row echelon, tracking pivot columns
    std::vector<size_t> pivot_col;
    size_t pr = 0;
    for (size_t pc = 0; pc < n && pr < n; ++pc) {
        size_t piv = pr;
        while (piv < n && a[piv][pc] == 0) ++piv;
        if (piv == n) continue;
        std::swap(a[piv], a[pr]);
        for (size_t r = pr + 1; r < n; ++r) {
            if (a[r][pc] == 0) continue;
            BigRat f = a[r][pc] / a[pr][pc];
            for (size_t c = pc; c < n; ++c) a[r][c] -= f * a[pr][c];
        }
        pivot_col.push_back(pc);
        ++pr;
    }
    if (pivot_col.size() != n - 1)
        throw std::runtime_error("kernel: nullity is not 1 at this specialization");

    // the single free column gets value 1; back-substitute the pivots
    std::vector<bool> is_pivot(n, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    size_t free_col = 0;
    while (free_col < n && is_pivot[free_col]) ++free_col;

    std::vector<BigRat> v(n, BigRat(0));
    v[free_col] = 1;
    for (size_t i = pivot_col.size(); i-- > 0;) {
        size_t pc = pivot_col[i];
        BigRat acc(0);
        for (size_t c = pc + 1; c < n; ++c) acc += a[i][c] * v[c];
        v[pc] = -acc / a[i][pc];
    }
    if (v[normalize_index] == 0)
        throw std::runtime_error("kernel: normalization entry vanished");
    BigRat scale = v[normalize_index];
    for (auto& x : v) x /= scale;
    return v;
}

std::string IdentReport::to_json() const {
    std::ostringstream os;
    os << "{\"identifiable\": " << (identifiable ? "true" : "false")
       << ", \"rank\": " << rank << ", \"expected_rank\": " << expected_rank
       << ", \"N\": " << N << ", \"M\": " << M
       << ", \"normalization_index\": " << normalization_index
       << ", \"probabilistic\": " << (probabilistic ? "true" : "false")
       << ", \"specialization_seeds\": [";
    for (size_t i = 0; i < seeds_used.size(); ++i)
        os << (i ? ", " : "") << seeds_used[i];
    os << "]}";
    return os.str();
}

IdentReport is_projectively_identifiable(const CoefficientForm& cf, ModulePtr module,
                                         const RankOptions& opt) {
    bool all_zero = true;
    for (const auto& t : cf.sig)
        if (!t.a.is_zero()) all_zero = false;
    if (cf.sig.empty() || all_zero)
        throw std::invalid_argument("coefficient form has no nonzero signal coefficients");

    MMatrix m(cf, std::move(module));
    RankReport rr = rank_of(m, opt);

    IdentReport out;
    out.N = cf.n_sig() - 1;
    out.M = cf.n_force();
    out.expected_rank = out.N + out.M;
    out.rank = rr.rank;
    out.identifiable = (rr.rank == out.expected_rank);
    out.probabilistic = rr.probabilistic;
    out.seeds_used = rr.seeds_used;

    // designate a certified-nonzero coefficient: prefer a constant one
    out.normalization_index = -1;
    for (unsigned i = 0; i < cf.n_sig(); ++i) {
        if (cf.sig[i].a.is_constant() && !cf.sig[i].a.is_zero()) {
            out.normalization_index = static_cast<int>(i);
            break;
        }
    }
    if (out.normalization_index < 0)
        for (unsigned i = 0; i < cf.n_sig(); ++i)
            if (!cf.sig[i].a.is_zero()) {
                out.normalization_index = static_cast<int>(i);
                break;
            }
    return out;
}

// ------------------------------------------------------------- systems

OpExpr merge_terms(OpExpr terms) {
    std::sort(terms.begin(), terms.end(), [](const OpTerm& a, const OpTerm& b) {
        if (a.unit != b.unit) return a.unit < b.unit;
        if (a.d_ord != b.d_ord) return a.d_ord < b.d_ord;
        return a.s_pow < b.s_pow;
    });
    OpExpr out;
    for (const auto& t : terms) {
        if (t.c == 0) continue;
        if (!out.empty() && out.back().unit == t.unit && out.back().d_ord == t.d_ord &&
            out.back().s_pow == t.s_pow) {
            out.back().c += t.c;
            if (out.back().c == 0) out.pop_back();
        } else {
            out.push_back(t);
        }
    }
    return out;
}

OpExpr scale_expr(const OpExpr& e, const BigRat& c) {
    OpExpr out;
    if (c == 0) return out;
    out.reserve(e.size());
    for (auto t : e) {
        t.c *= c;
        out.push_back(t);
    }
    return out;
}

OpExpr shift_expr(const OpExpr& e, int s_shift) {
    OpExpr out;
    out.reserve(e.size());
    for (auto t : e) {
        t.s_pow += s_shift;
        out.push_back(t);
    }
    return out;
}

namespace {

// affine split c = c0 + sum theta_i * c_i with rational c_i
struct AffineScalar {
    BigRat free;
    std::vector<BigRat> per_theta;
};

AffineScalar affine_split(const ParamScalar& c, const std::vector<SymId>& thetas) {
    const BigRat* den = c.den().constant_value();
    if (!den)
        throw std::invalid_argument("coefficient has a parameter-dependent denominator");
    AffineScalar out;
    out.free = 0;
    out.per_theta.assign(thetas.size(), BigRat(0));
    for (const auto& [mono, coeff] : c.num().terms()) {
        int theta_slot = -1;
        bool bad = false;
        for (const auto& [sym, e] : mono.factors()) {
            auto it = std::find(thetas.begin(), thetas.end(), sym);
            if (it == thetas.end()) {
                bad = true;  // leftover non-theta symbol
                break;
            }
            if (e > 1 || theta_slot >= 0) {
                bad = true;  // quadratic in theta
                break;
            }
            theta_slot = static_cast<int>(it - thetas.begin());
        }
        if (bad)
            throw std::invalid_argument(
                "relation is not affine in the estimated parameters after elimination");
        BigRat v = coeff / *den;
        if (theta_slot < 0) out.free += v;
        else out.per_theta[static_cast<size_t>(theta_slot)] += v;
    }
    return out;
}

}  // namespace

LinearSystemSpec build_estimator_system(const OperationalRelation& rel,
                                        const std::vector<SymId>& thetas,
                                        int multiplier_offset) {
    if (thetas.empty()) throw std::invalid_argument("empty parameter set");

    // figure out which symbols the forcing polynomial carries
    std::set<SymId> rhs_syms;
    rel.rhs.collect_symbols(rhs_syms);
    bool rhs_has_nuisance = false, rhs_has_theta = false;
    for (SymId s : rhs_syms) {
        if (std::find(thetas.begin(), thetas.end(), s) != thetas.end()) rhs_has_theta = true;
        else rhs_has_nuisance = true;
    }

    DiffOp lhs = rel.lhs;
    SPoly rhs = rel.rhs;
    if (rhs_has_nuisance) {
        if (rhs_has_theta)
            throw std::invalid_argument(
                "forcing polynomial mixes estimated parameters with initial-condition symbols");
        lhs = homogenize(rel);
        rhs = SPoly();
    }

    // E = lhs(x) - rhs(1) = F0 + sum theta_i F_i, term by term
    OpExpr F0;
    std::vector<OpExpr> F(thetas.size());
    auto deposit = [&](const ParamScalar& c, int s_pow, unsigned d_ord, bool unit) {
        AffineScalar af = affine_split(c, thetas);
        if (af.free != 0) F0.push_back({af.free, s_pow, d_ord, unit});
        for (size_t i = 0; i < thetas.size(); ++i)
            if (af.per_theta[i] != 0) F[i].push_back({af.per_theta[i], s_pow, d_ord, unit});
    };
    for (int j = 0; j <= lhs.order(); ++j) {
        const RatFunc& r = lhs.coeff(static_cast<unsigned>(j));
        if (r.is_zero()) continue;
        if (!r.is_polynomial())
            throw std::invalid_argument("operator coefficients must be polynomial in s");
        for (int mu = 0; mu <= r.num().degree(); ++mu)
            deposit(r.num().coeff(static_cast<unsigned>(mu)), mu, static_cast<unsigned>(j), false);
    }
    for (int k = 0; k <= rhs.degree(); ++k)
        deposit(-rhs.coeff(static_cast<unsigned>(k)), k, 0, true);

    // properness rule: one past the largest nonnegative s power anywhere
    int max_pow = -1;
    auto scan = [&](const OpExpr& e) {
        for (const auto& t : e) max_pow = std::max(max_pow, t.s_pow);
    };
    scan(F0);
    for (const auto& e : F) scan(e);
    int K = (max_pow < 0 ? 0 : max_pow + 1) + multiplier_offset;

    LinearSystemSpec sys;
    sys.thetas = thetas;
    const unsigned rho = static_cast<unsigned>(thetas.size());
    sys.A.resize(rho);
    sys.B.resize(rho);
    // E = F0 + sum theta_i F_i = 0, rearranged as sum theta_i (-F_i) = F0
    for (unsigned r = 0; r < rho; ++r) {
        int m = K + static_cast<int>(r);
        for (unsigned i = 0; i < rho; ++i)
            sys.A[r].push_back(merge_terms(shift_expr(scale_expr(F[i], BigRat(-1)), -m)));
        sys.B[r] = merge_terms(shift_expr(F0, -m));
        if (sys.A[r].size() != rho) throw std::logic_error("system width mismatch");
        bool all_empty = true;
        for (const auto& e : sys.A[r])
            if (!e.empty()) all_empty = false;
        if (all_empty)
            throw std::invalid_argument(
                "estimated parameters do not appear in the relation");
    }
    return sys;
}

}  // namespace opcalc
