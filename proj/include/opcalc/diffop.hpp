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

#ifndef OPCALC_DIFFOP_HPP
#define OPCALC_DIFFOP_HPP

#include "opcalc/ratfunc.hpp"

namespace opcalc {

/// Linear differential operator sum_j r_j(s) (d/ds)^j in normal form with
/// the derivations on the right.  Composition is noncommutative and obeys
/// (d/ds) r = r (d/ds) + r'.
class DiffOp {
  public:
    DiffOp() = default;                         // zero operator
    DiffOp(const RatFunc& r);                   // multiplication operator
    explicit DiffOp(std::vector<RatFunc> coeffs);  // coeffs[j] * D^j
    static DiffOp identity();
    static DiffOp dds();  // d/ds

    int order() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const RatFunc& coeff(unsigned j) const;

    DiffOp operator+(const DiffOp& rhs) const;
    DiffOp operator-(const DiffOp& rhs) const;
    DiffOp operator*(const DiffOp& rhs) const;  // composition: this after rhs
    DiffOp operator-() const;
    DiffOp scaled(const RatFunc& r) const;  // left multiplication by r(s)
    bool operator==(const DiffOp& rhs) const { return c_ == rhs.c_; }

    RatFunc apply(const RatFunc& f) const;  // sum_j r_j f^(j)

    DiffOp substitute(SymId sym, const BigRat& value) const;
    void collect_symbols(std::set<SymId>& out) const;

    std::string to_string() const;  // D stands for d/ds

  private:
    void trim();
    std::vector<RatFunc> c_;
};

/// op composed with itself k times applied after rhs: D^k * rhs helper.
DiffOp dds_power(unsigned k);

}  // namespace opcalc

#endif
