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

#include "opcalc/estimator_plan.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace opcalc {

namespace {

int max_nonneg_power(const OpExpr& e) {
    int m = -1;
    for (const auto& t : e) m = std::max(m, t.s_pow);
    return m;
}

TimeFunctional compile_expr(const OpExpr& e) {
    TimeFunctional out;
    for (const auto& t : e) {
        if (t.s_pow >= 0)
            throw std::invalid_argument("compile: positive powers of s remain in a row");
        IntegralAtom atom;
        atom.c = t.c;
        atom.k = static_cast<unsigned>(-t.s_pow);
        if (t.unit) {
            if (t.d_ord > 0) continue;  // d/ds of the constant function is zero
            atom.j = 0;
            atom.src = IntegralAtom::Source::Unit;
        } else {
            atom.j = t.d_ord;
            atom.src = IntegralAtom::Source::Measured;
        }
        out.atoms.push_back(atom);
    }
    // merge duplicates
    std::sort(out.atoms.begin(), out.atoms.end(), [](const IntegralAtom& a, const IntegralAtom& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.k != b.k) return a.k < b.k;
        return a.j < b.j;
    });
    std::vector<IntegralAtom> merged;
    for (const auto& a : out.atoms) {
        if (!merged.empty() && merged.back().src == a.src && merged.back().k == a.k &&
            merged.back().j == a.j) {
            merged.back().c += a.c;
            if (merged.back().c == 0) merged.pop_back();
        } else if (a.c != 0) {
            merged.push_back(a);
        }
    }
    out.atoms = std::move(merged);
    return out;
}

}  // namespace

LinearSystemSpec normalize_strictly_proper(const LinearSystemSpec& sys) {
    LinearSystemSpec out = sys;
    const unsigned rho = sys.arity();
    for (unsigned r = 0; r < rho; ++r) {
        int mp = max_nonneg_power(sys.B[r]);
        for (const auto& e : sys.A[r]) mp = std::max(mp, max_nonneg_power(e));
        int K = mp < 0 ? 0 : mp + 1;
        for (unsigned i = 0; i < rho; ++i)
            out.A[r][i] = merge_terms(shift_expr(sys.A[r][i], -K));
        out.B[r] = merge_terms(shift_expr(sys.B[r], -K));
    }
    out.strictly_proper = true;
    return out;
}

EstimatorPlan compile_plan(const LinearSystemSpec& sys, const std::vector<SymId>& names) {
    LinearSystemSpec proper = sys.strictly_proper ? sys : normalize_strictly_proper(sys);
    EstimatorPlan plan;
    for (SymId s : names) plan.params.push_back(SymbolTable::name(s));
    const unsigned rho = proper.arity();
    plan.A.resize(rho);
    plan.B.resize(rho);
    for (unsigned r = 0; r < rho; ++r) {
        for (unsigned i = 0; i < rho; ++i) plan.A[r].push_back(compile_expr(proper.A[r][i]));
        plan.B[r] = compile_expr(proper.B[r]);
    }
    return plan;
}

TimeFunctional compile_annihilator(const DiffOp& op) {
    OpExpr e;
    for (int j = 0; j <= op.order(); ++j) {
        const RatFunc& r = op.coeff(static_cast<unsigned>(j));
        if (r.is_zero()) continue;
        if (!r.is_polynomial())
            throw std::invalid_argument("annihilator coefficients must be polynomial in s");
        for (int mu = 0; mu <= r.num().degree(); ++mu) {
            auto v = r.num().coeff(static_cast<unsigned>(mu)).to_rat();
            if (!v) throw std::invalid_argument("annihilator must be fully numeric");
            if (*v != 0) e.push_back({*v, mu, static_cast<unsigned>(j), false});
        }
    }
    int K = max_nonneg_power(e) + 1;
    return compile_expr(merge_terms(shift_expr(e, -K)));
}

NoiseImage perturbation_image(const EstimatorPlan& plan) {
    NoiseImage img;
    img.theta_part = plan.A;
    img.b_part = plan.B;
    return img;  // same atoms, interpreted against the perturbation
}

// ----------------------------------------------------------------- JSON

namespace {

nlohmann::json atom_to_json(const IntegralAtom& a) {
    return nlohmann::json{{"c", rat_to_string(a.c)},
                          {"k", a.k},
                          {"j", a.j},
                          {"source", a.src == IntegralAtom::Source::Unit ? "unit" : "measured"}};
}

IntegralAtom atom_from_json(const nlohmann::json& j) {
    IntegralAtom a;
    a.c = rat_from_string(j.at("c").get<std::string>());
    a.k = j.at("k").get<unsigned>();
    a.j = j.at("j").get<unsigned>();
    a.src = j.at("source").get<std::string>() == "unit" ? IntegralAtom::Source::Unit
                                                        : IntegralAtom::Source::Measured;
    if (a.k < 1) throw std::invalid_argument("atom multiplicity must be >= 1");
    if (a.src == IntegralAtom::Source::Unit && a.j != 0)
        throw std::invalid_argument("unit atoms carry no tau power");
    return a;
}

nlohmann::json functional_to_json(const TimeFunctional& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : f.atoms) arr.push_back(atom_to_json(a));
    return arr;
}

TimeFunctional functional_from_json(const nlohmann::json& j) {
    TimeFunctional f;
    for (const auto& a : j) f.atoms.push_back(atom_from_json(a));
    return f;
}

}  // namespace

std::string EstimatorPlan::to_json() const {
    nlohmann::json j;
    j["parameters"] = params;
    j["A"] = nlohmann::json::array();
    for (const auto& row : A) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& f : row) r.push_back(functional_to_json(f));
        j["A"].push_back(r);
    }
    j["B"] = nlohmann::json::array();
    for (const auto& f : B) j["B"].push_back(functional_to_json(f));
    j["divisor"] = "det(A)";
    return j.dump(2);
}

EstimatorPlan EstimatorPlan::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    EstimatorPlan plan;
    plan.params = j.at("parameters").get<std::vector<std::string>>();
    for (const auto& row : j.at("A")) {
        std::vector<TimeFunctional> r;
        for (const auto& f : row) r.push_back(functional_from_json(f));
        plan.A.push_back(std::move(r));
    }
    for (const auto& f : j.at("B")) plan.B.push_back(functional_from_json(f));
    const size_t rho = plan.params.size();
    if (plan.A.size() != rho || plan.B.size() != rho)
        throw std::invalid_argument("plan arity mismatch");
    for (const auto& row : plan.A)
        if (row.size() != rho) throw std::invalid_argument("plan A must be square");
    return plan;
}

namespace {

std::string atom_text(const IntegralAtom& a) {
    std::ostringstream os;
    os << rat_to_string(a.c);
    if (a.src == IntegralAtom::Source::Unit) {
        os << " * t^" << (a.k - 1) << "/" << (a.k - 1) << "!";
    } else {
        os << " * I[k=" << a.k << ", tau^" << a.j << "]";
    }
    return os.str();
}

}  // namespace

std::string EstimatorPlan::atom_table() const {
    std::ostringstream os;
    for (size_t r = 0; r < A.size(); ++r) {
        for (size_t i = 0; i < A[r].size(); ++i) {
            os << "A[" << r << "][" << i << "] :";
            for (const auto& a : A[r][i].atoms) os << "  " << atom_text(a);
            os << "\n";
        }
        os << "B[" << r << "]    :";
        for (const auto& a : B[r].atoms) os << "  " << atom_text(a);
        os << "\n";
    }
    return os.str();
}

}  // namespace opcalc
