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

#ifndef OPCALC_TORSION_MODULE_HPP
#define OPCALC_TORSION_MODULE_HPP

#include <memory>

#include "opcalc/diffop.hpp"

namespace opcalc {

/// Finite-dimensional k(s)-vector space spanned by (1, x, x', ..., x^(n-1))
/// where x is the transform of the signal.  The reduction rule rewrites
/// x^(n) back into the basis; derivatives of any order then reduce by
/// repeated application.
class AnnihilatorModule {
  public:
    /// rule: x^(n) = rule_const * 1 + sum_i rule_sig[i] * x^(i), i < n.
    AnnihilatorModule(unsigned order, RatFunc rule_const, std::vector<RatFunc> rule_sig);

    unsigned order() const { return order_; }       // n
    unsigned dimension() const { return order_ + 1; }  // n + 1 basis slots
    const RatFunc& rule_const() const { return rule_const_; }
    const std::vector<RatFunc>& rule_sig() const { return rule_sig_; }

  private:
    unsigned order_;
    RatFunc rule_const_;
    std::vector<RatFunc> rule_sig_;
};

using ModulePtr = std::shared_ptr<const AnnihilatorModule>;

/// Coordinate vector over the basis (1, x, x', ..., x^(n-1)).
class ModuleElement {
  public:
    ModuleElement() = default;
    explicit ModuleElement(ModulePtr m);  // zero element
    ModuleElement(ModulePtr m, std::vector<RatFunc> coords);

    const ModulePtr& module() const { return mod_; }
    const std::vector<RatFunc>& coords() const { return coords_; }
    const RatFunc& unit_coord() const { return coords_[0]; }
    const RatFunc& signal_coord(unsigned i) const { return coords_[1 + i]; }

    ModuleElement operator+(const ModuleElement& rhs) const;
    ModuleElement operator-(const ModuleElement& rhs) const;
    ModuleElement scaled(const RatFunc& r) const;
    ModuleElement derivative() const;  // d/ds with reduction of the top slot
    bool operator==(const ModuleElement& rhs) const { return coords_ == rhs.coords_; }
    bool is_zero() const;

    /// Specialize s, the parameters, and the basis signal slots to numbers.
    /// nullopt when a coordinate hits a pole.
    std::optional<BigRat> eval(const BigRat& s_value,
                               const std::map<SymId, BigRat>& params,
                               const std::vector<BigRat>& basis_values) const;

    std::string to_string() const;

  private:
    ModulePtr mod_;
    std::vector<RatFunc> coords_;
};

/// x^(k) reduced into the basis (valid for any k >= 0).
ModuleElement reduce_signal_derivative(const ModulePtr& m, unsigned k);

/// One formal term r(s) * x^(k)  (signal) or r(s) * 1 (unit, k ignored).
struct FormalTerm {
    RatFunc r;
    unsigned derivative_order = 0;
    bool is_signal = true;
};

/// Reduce a formal sum of terms to its unique coordinate vector.
ModuleElement module_reduce(const ModulePtr& m, const std::vector<FormalTerm>& terms);

/// Module for a rational signal transform (order 0): x = value * 1.
ModulePtr module_for_rational(const RatFunc& xhat);

}  // namespace opcalc

#endif
