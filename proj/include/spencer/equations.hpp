#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "spencer/scalar.hpp"

namespace spencer {

/// a · ∂^alpha u_unknown
struct Term {
    Rational coef;
    int unknown = 0;
    std::vector<int> alpha;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Σ terms = 0, every term of the same total order.
struct Equation {
    std::vector<Term> terms;
    int order = 0;
    int line = 0;  // 1-based source line, 0 when built programmatically

    friend bool operator==(const Equation& a, const Equation& b) {
        return a.terms == b.terms && a.order == b.order;
    }
};

struct EquationSet {
    std::vector<std::string> vars;
    std::vector<std::string> unknowns;
    std::vector<Equation> equations;

    int n() const { return static_cast<int>(vars.size()); }
    int nu() const { return static_cast<int>(unknowns.size()); }
    int max_order() const {
        int r = 0;
        for (const auto& e : equations) r = std::max(r, e.order);
        return r;
    }

    friend bool operator==(const EquationSet&, const EquationSet&) = default;
};

}  // namespace spencer
