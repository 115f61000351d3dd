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

#include "opcalc/diffop.hpp"

#include <sstream>

namespace opcalc {

DiffOp::DiffOp(const RatFunc& r) {
    if (!r.is_zero()) c_.push_back(r);
}

DiffOp::DiffOp(std::vector<RatFunc> coeffs) : c_(std::move(coeffs)) { trim(); }

DiffOp DiffOp::identity() { return DiffOp(RatFunc(1)); }

DiffOp DiffOp::dds() {
    std::vector<RatFunc> c(2);
    c[1] = RatFunc(1);
    return DiffOp(std::move(c));
}

void DiffOp::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const RatFunc& DiffOp::coeff(unsigned j) const {
    static const RatFunc zero;
    if (j >= c_.size()) return zero;
    return c_[j];
}

DiffOp DiffOp::operator+(const DiffOp& rhs) const {
    std::vector<RatFunc> out(std::max(c_.size(), rhs.c_.size()));
    for (size_t j = 0; j < out.size(); ++j) out[j] = coeff(j) + rhs.coeff(j);
    return DiffOp(std::move(out));
}

DiffOp DiffOp::operator-(const DiffOp& rhs) const {
    std::vector<RatFunc> out(std::max(c_.size(), rhs.c_.size()));
    for (size_t j = 0; j < out.size(); ++j) out[j] = coeff(j) - rhs.coeff(j);
    return DiffOp(std::move(out));
}

DiffOp DiffOp::operator-() const {
    DiffOp out = *this;
    for (auto& r : out.c_) r = -r;
    return out;
}

DiffOp DiffOp::scaled(const RatFunc& r) const {
    if (r.is_zero()) return DiffOp();
    DiffOp out = *this;
    for (auto& c : out.c_) c = c * r;
    return out;
}

namespace {

// D composed after op: D * (sum q_i D^i) = sum (q_i D^{i+1} + q_i' D^i)
DiffOp dds_after(const DiffOp& op) {
    if (op.is_zero()) return DiffOp();
    std::vector<RatFunc> out(static_cast<size_t>(op.order()) + 2);
    for (int i = 0; i <= op.order(); ++i) {
        const RatFunc& q = op.coeff(static_cast<unsigned>(i));
        out[i + 1] = out[i + 1] + q;
        out[i] = out[i] + q.derivative();
    }
    return DiffOp(std::move(out));
}

}  // namespace

DiffOp DiffOp::operator*(const DiffOp& rhs) const {
    DiffOp acc;
    // powers[j] = D^j * rhs, built incrementally
    DiffOp power = rhs;
    for (int j = 0; j <= order(); ++j) {
        const RatFunc& r = coeff(static_cast<unsigned>(j));
        if (!r.is_zero()) acc = acc + power.scaled(r);
        if (j < order()) power = dds_after(power);
    }
    return acc;
}

RatFunc DiffOp::apply(const RatFunc& f) const {
    RatFunc acc;
    RatFunc der = f;
    for (int j = 0; j <= order(); ++j) {
        const RatFunc& r = coeff(static_cast<unsigned>(j));
        if (!r.is_zero()) acc = acc + r * der;
        if (j < order()) der = der.derivative();
    }
    return acc;
}

DiffOp DiffOp::substitute(SymId sym, const BigRat& value) const {
    std::vector<RatFunc> out(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) out[j] = c_[j].substitute(sym, value);
    return DiffOp(std::move(out));
}

void DiffOp::collect_symbols(std::set<SymId>& out) const {
    for (const auto& c : c_) c.collect_symbols(out);
}

std::string DiffOp::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int j = order(); j >= 0; --j) {
        const RatFunc& r = coeff(static_cast<unsigned>(j));
        if (r.is_zero()) continue;
        if (!first) os << " + ";
        if (j == 0) {
            os << r.to_string();
        } else {
            if (!r.is_one()) os << "(" << r.to_string() << ")*";
            os << "D";
            if (j > 1) os << "^" << j;
        }
        first = false;
    }
    return os.str();
}

DiffOp dds_power(unsigned k) {
    DiffOp out = DiffOp::identity();
    for (unsigned i = 0; i < k; ++i) out = DiffOp::dds() * out;
    return out;
}

}  // namespace opcalc
