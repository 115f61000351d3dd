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

#include "opcalc/torsion_module.hpp"

#include <sstream>
#include <stdexcept>

namespace opcalc {

AnnihilatorModule::AnnihilatorModule(unsigned order, RatFunc rule_const,
                                     std::vector<RatFunc> rule_sig)
    : order_(order), rule_const_(std::move(rule_const)), rule_sig_(std::move(rule_sig)) {
    if (rule_sig_.size() != order_)
        throw std::invalid_argument("AnnihilatorModule: rule arity mismatch");
}

ModuleElement::ModuleElement(ModulePtr m) : mod_(std::move(m)) {
    coords_.assign(mod_->dimension(), RatFunc());
}

ModuleElement::ModuleElement(ModulePtr m, std::vector<RatFunc> coords)
    : mod_(std::move(m)), coords_(std::move(coords)) {
    if (coords_.size() != mod_->dimension())
        throw std::invalid_argument("ModuleElement: coordinate length mismatch");
}

ModuleElement ModuleElement::operator+(const ModuleElement& rhs) const {
    ModuleElement out = *this;
    for (size_t i = 0; i < coords_.size(); ++i) out.coords_[i] = coords_[i] + rhs.coords_[i];
    return out;
}

ModuleElement ModuleElement::operator-(const ModuleElement& rhs) const {
    ModuleElement out = *this;
    for (size_t i = 0; i < coords_.size(); ++i) out.coords_[i] = coords_[i] - rhs.coords_[i];
    return out;
}

ModuleElement ModuleElement::scaled(const RatFunc& r) const {
    ModuleElement out = *this;
    for (auto& c : out.coords_) c = c * r;
    return out;
}

ModuleElement ModuleElement::derivative() const {
    const unsigned n = mod_->order();
    ModuleElement out(mod_);
    for (size_t i = 0; i < coords_.size(); ++i) out.coords_[i] = coords_[i].derivative();
    // shift the signal slots: coefficient of x^(i) feeds x^(i+1)
    for (unsigned i = 0; i < n; ++i) {
        const RatFunc& c = coords_[1 + i];
        if (c.is_zero()) continue;
        if (i + 1 < n) {
            out.coords_[1 + i + 1] = out.coords_[1 + i + 1] + c;
        } else {
            out.coords_[0] = out.coords_[0] + c * mod_->rule_const();
            for (unsigned j = 0; j < n; ++j)
                out.coords_[1 + j] = out.coords_[1 + j] + c * mod_->rule_sig()[j];
        }
    }
    return out;
}

bool ModuleElement::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

std::optional<BigRat> ModuleElement::eval(const BigRat& s_value,
                                          const std::map<SymId, BigRat>& params,
                                          const std::vector<BigRat>& basis_values) const {
    if (basis_values.size() != mod_->order())
        throw std::invalid_argument("eval: basis value count must equal module order");
    auto u = coords_[0].eval(s_value, params);
    if (!u) return std::nullopt;
    BigRat acc = *u;
    for (unsigned i = 0; i < mod_->order(); ++i) {
        auto c = coords_[1 + i].eval(s_value, params);
        if (!c) return std::nullopt;
        acc += *c * basis_values[i];
    }
    return acc;
}

std::string ModuleElement::to_string() const {
    std::ostringstream os;
    os << "(" << coords_[0].to_string() << ")*1";
    for (unsigned i = 0; i + 1 < coords_.size(); ++i) {
        os << " + (" << coords_[1 + i].to_string() << ")*x";
        for (unsigned a = 0; a < i; ++a) os << "'";
    }
    return os.str();
}

ModuleElement reduce_signal_derivative(const ModulePtr& m, unsigned k) {
    const unsigned n = m->order();
    if (k < n) {
        ModuleElement e(m);
        std::vector<RatFunc> coords(m->dimension());
        coords[1 + k] = RatFunc(1);
        return ModuleElement(m, std::move(coords));
    }
    // x^(n) is the rule itself; higher orders differentiate it
    std::vector<RatFunc> coords(m->dimension());
    coords[0] = m->rule_const();
    for (unsigned j = 0; j < n; ++j) coords[1 + j] = m->rule_sig()[j];
    ModuleElement e(m, std::move(coords));
    for (unsigned i = n; i < k; ++i) e = e.derivative();
    return e;
}

ModuleElement module_reduce(const ModulePtr& m, const std::vector<FormalTerm>& terms) {
    ModuleElement acc(m);
    for (const auto& t : terms) {
        if (t.r.is_zero()) continue;
        if (t.is_signal) {
            acc = acc + reduce_signal_derivative(m, t.derivative_order).scaled(t.r);
        } else {
            std::vector<RatFunc> coords(m->dimension());
            coords[0] = t.r;
            acc = acc + ModuleElement(m, std::move(coords));
        }
    }
    return acc;
}

ModulePtr module_for_rational(const RatFunc& xhat) {
    if (xhat.is_zero()) throw std::invalid_argument("zero signal has no annihilator module");
    return std::make_shared<AnnihilatorModule>(0u, xhat, std::vector<RatFunc>{});
}

}  // namespace opcalc
