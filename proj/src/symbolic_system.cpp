#include "spencer/symbolic_system.hpp"

#include <algorithm>

namespace spencer {

RSubspace prolong(const RSubspace& h, int n, int nu, int k) {
    GradedSlot up{n, nu, k + 1, 0};
    if (h.ambient_dim() != slot_dim({n, nu, k, 0})) throw std::invalid_argument("prolong: h has the wrong slot");
    if (h.is_full()) return RSubspace::full(slot_dim(up));
    if (h.is_zero()) return RSubspace(slot_dim(up));
    const RMatrix ann = h.annihilator().basis();
    RMatrix rows(0, slot_dim(up));
    for (int i = 0; i < n; ++i) {
        const auto& d = partial_derivative(i, up);
        for (std::size_t r = 0; r < ann.rows(); ++r) rows.append_row(d.pullback(ann.row(r)));
    }
    return kernel(rows);
}

RSubspace prolong_iterated(const RSubspace& h, int n, int nu, int k, int l) {
    RSubspace cur = h;
    for (int s = 0; s < l; ++s) cur = prolong(cur, n, nu, k + s);
    return cur;
}

SymbolicSystem::SymbolicSystem(int n, int nu, std::vector<RSubspace> levels, std::optional<int> closed_from)
    : n_(n), nu_(nu), levels_(std::move(levels)), closed_from_(closed_from) {
    if (n < 1 || nu < 1) throw std::invalid_argument("SymbolicSystem: need n ≥ 1 and ν ≥ 1");
    if (levels_.empty()) throw std::invalid_argument("SymbolicSystem: no levels");
    for (std::size_t k = 0; k < levels_.size(); ++k)
        if (levels_[k].ambient_dim() != slot_dim({n, nu, static_cast<int>(k), 0}))
            throw std::invalid_argument("SymbolicSystem: level " + std::to_string(k) + " has the wrong ambient space");
    if (closed_from_ && *closed_from_ > cap())
        throw CapExceeded("SymbolicSystem: cap " + std::to_string(cap()) + " below closing degree " +
                          std::to_string(*closed_from_));
}

const RSubspace& SymbolicSystem::empty_level() {
    static const RSubspace zero(0);
    return zero;
}

const RSubspace& SymbolicSystem::level(int k) const {
    if (k < 0) return empty_level();
    if (k > cap()) throw CapExceeded("level " + std::to_string(k) + " is beyond the degree cap " + std::to_string(cap()));
    return levels_[static_cast<std::size_t>(k)];
}

SymbolicSystem SymbolicSystem::with_cap(int new_cap) const {
    if (new_cap < 0) throw std::invalid_argument("with_cap: negative cap");
    SymbolicSystem out = *this;
    if (new_cap <= cap()) {
        out.levels_.resize(static_cast<std::size_t>(new_cap) + 1);
        if (out.closed_from_ && *out.closed_from_ > new_cap) out.closed_from_.reset();
        return out;
    }
    if (!closed_from_)
        throw CapExceeded("level " + std::to_string(new_cap) + " requested but the system is only known through " +
                          std::to_string(cap()));
    for (int k = cap() + 1; k <= new_cap; ++k) out.levels_.push_back(prolong(out.levels_.back(), n_, nu_, k - 1));
    return out;
}

SymbolicSystem SymbolicSystem::free(int n, int nu, int cap) {
    std::vector<RSubspace> levels;
    for (int k = 0; k <= cap; ++k) levels.push_back(RSubspace::full(slot_dim({n, nu, k, 0})));
    return SymbolicSystem(n, nu, std::move(levels), 0);
}

SymbolicSystem SymbolicSystem::from_functionals(int n, int nu, const std::map<int, RMatrix>& functionals, int cap) {
    int top = 0;
    for (const auto& [r, f] : functionals) {
        if (r < 1) throw std::invalid_argument("equations of order 0 are not symbols");
        if (f.cols() != slot_dim({n, nu, r, 0})) throw std::invalid_argument("functional of the wrong width");
        top = std::max(top, r);
    }
    if (cap < top)
        throw CapExceeded("degree cap " + std::to_string(cap) + " is below the equation order " + std::to_string(top));
    std::vector<RSubspace> levels{RSubspace::full(static_cast<std::size_t>(nu))};
    for (int k = 1; k <= cap; ++k) {
        RSubspace next = prolong(levels.back(), n, nu, k - 1);
        if (auto it = functionals.find(k); it != functionals.end()) next = kernel_on(it->second, next);
        levels.push_back(std::move(next));
    }
    SymbolicSystem g(n, nu, std::move(levels), top);
    g.set_generators(functionals);
    return g;
}

std::vector<Rational> equation_functional(const Equation& eq, int n, int nu) {
    BasisIndexer ix({n, nu, eq.order, 0});
    std::vector<Rational> f(ix.dim());
    for (const auto& t : eq.terms) {
        if (t.unknown < 0 || t.unknown >= nu) throw std::invalid_argument("equation term: unknown out of range");
        if (static_cast<int>(t.alpha.size()) != n || degree(t.alpha) != eq.order)
            throw std::invalid_argument("equation term: multi-index does not match the order");
        Rational fact = 1;
        for (int a : t.alpha)
            for (int q = 2; q <= a; ++q) fact *= q;
        f[ix.index(t.unknown, t.alpha, {})] += t.coef * fact;
    }
    return f;
}

SymbolicSystem SymbolicSystem::from_equations(const EquationSet& eqs, int cap) {
    if (eqs.n() < 1 || eqs.nu() < 1) throw std::invalid_argument("need at least one variable and one unknown");
    std::map<int, RMatrix> functionals;
    for (const auto& e : eqs.equations) {
        auto f = equation_functional(e, eqs.n(), eqs.nu());
        auto [it, fresh] = functionals.try_emplace(e.order, 0, f.size());
        it->second.append_row(f);
    }
    return from_functionals(eqs.n(), eqs.nu(), functionals, cap);
}

bool satisfies_axiom(const SymbolicSystem& g) {
    for (int k = 1; k <= g.cap(); ++k)
        if (!prolong(g.level(k - 1), g.n(), g.nu(), k - 1).contains(g.level(k))) return false;
    return true;
}

bool OrderProfile::contains(int r) const { return std::find(orders.begin(), orders.end(), r) != orders.end(); }

OrderProfile order_profile(const SymbolicSystem& g) {
    OrderProfile p;
    if (!g.level(0).is_full()) {
        p.orders.push_back(0);
        p.multiplicity[0] = static_cast<std::size_t>(g.nu()) - g.level(0).dim();
    }
    for (int k = 1; k <= g.cap(); ++k) {
        auto pro = prolong(g.level(k - 1), g.n(), g.nu(), k - 1);
        if (pro == g.level(k)) continue;
        p.orders.push_back(k);
        p.multiplicity[k] = pro.dim() - g.level(k).dim();
    }
    p.certified = g.closed_from().has_value() && *g.closed_from() <= g.cap();
    return p;
}

SymbolicSystem derived_system(const SymbolicSystem& g, int k) {
    if (k < 0) throw std::invalid_argument("derived_system: negative order");
    if (k > g.cap()) throw CapExceeded("derived_system: order " + std::to_string(k) + " beyond the cap");
    std::vector<RSubspace> levels;
    for (int i = 0; i < k; ++i) levels.push_back(RSubspace::full(slot_dim({g.n(), g.nu(), i, 0})));
    levels.push_back(g.level(k));
    for (int i = k + 1; i <= g.cap(); ++i) levels.push_back(prolong(levels.back(), g.n(), g.nu(), i - 1));
    return SymbolicSystem(g.n(), g.nu(), std::move(levels), k);
}

SymbolicSystem restrict_system(const SymbolicSystem& g, const RMatrix& w_basis) {
    const int s = static_cast<int>(w_basis.rows());
    if (s < 1) throw std::invalid_argument("restrict_system: W must be nonzero");
    std::vector<RSubspace> levels;
    for (int k = 0; k <= g.cap(); ++k) {
        auto map = restriction_map(w_basis, {g.n(), g.nu(), k, 0});
        auto img = image(map, g.level(k));
        levels.push_back(img.ambient_dim() == map.rows() ? img : RSubspace(map.rows()));
    }
    return SymbolicSystem(s, g.nu(), std::move(levels), std::nullopt);
}

SymbolicSystem change_coordinates(const SymbolicSystem& g, const RMatrix& p) {
    if (p.rows() != static_cast<std::size_t>(g.n()) || rank(p) != p.rows())
        throw std::invalid_argument("change_coordinates: need an invertible n×n matrix");
    std::vector<RSubspace> levels;
    for (int k = 0; k <= g.cap(); ++k) levels.push_back(image(restriction_map(p, {g.n(), g.nu(), k, 0}), g.level(k)));
    return SymbolicSystem(g.n(), g.nu(), std::move(levels), g.closed_from());
}

LinearMap<Rational> er_map(int n, int nu, int k, int l) {
    const int low = l - k + 1;
    const std::size_t sk1 = sym_dim(n, k - 1);
    const int nu2 = nu * static_cast<int>(sk1);
    BasisIndexer src({n, nu, l, 0});
    BasisIndexer dst({n, nu2, low, 0});
    LinearMap<Rational> m(dst.dim(), src.dim());
    const auto& betas = monomials(n, k - 1);
    const auto& alphas = monomials(n, l);
    MultiIndex rest(n);
    for (int mu = 0; mu < nu; ++mu)
        for (std::size_t a = 0; a < alphas.size(); ++a)
            for (std::size_t b = 0; b < betas.size(); ++b) {
                const auto& alpha = alphas[a];
                const auto& beta = betas[b];
                Rational c = 1;
                bool ok = true;
                for (int i = 0; i < n && ok; ++i) {
                    if (beta[i] > alpha[i]) ok = false;
                    rest[i] = alpha[i] - beta[i];
                    for (int q = rest[i] + 1; q <= alpha[i]; ++q) c *= q;
                }
                if (!ok) continue;
                m.add(dst.index(mu * static_cast<int>(sk1) + static_cast<int>(b), monomial_rank(rest), 0),
                      src.index(mu, a, 0), c);
            }
    return m;
}

SymbolicSystem equivalence_reduce(const SymbolicSystem& g, int k) {
    if (k < 1) throw std::invalid_argument("equivalence_reduce: k must be at least 1");
    for (int l = 0; l < k && l <= g.cap(); ++l)
        if (!g.level(l).is_full())
            throw std::invalid_argument("equivalence_reduce: the system has an order below " + std::to_string(k));
    if (g.cap() < k) throw CapExceeded("equivalence_reduce: cap below the reduction order");
    const int n = g.n();
    const int nu2 = g.nu() * static_cast<int>(sym_dim(n, k - 1));
    std::vector<RSubspace> levels{RSubspace::full(static_cast<std::size_t>(nu2))};
    for (int m = 1; m + k - 1 <= g.cap(); ++m) {
        auto map = er_map(n, g.nu(), k, m + k - 1);
        auto img = image(map, g.level(m + k - 1));
        levels.push_back(img);
    }
    std::optional<int> closed;
    if (g.closed_from()) closed = std::max(*g.closed_from() - k + 1, 1);
    if (closed && *closed >= static_cast<int>(levels.size())) closed.reset();
    return SymbolicSystem(n, nu2, std::move(levels), closed);
}

namespace {

RSubspace derivative_span(const RSubspace& h, int n, int nu, int k) {
    GradedSlot s{n, nu, k, 0};
    RMatrix rows(0, slot_dim({n, nu, k - 1, 0}));
    for (int i = 0; i < n; ++i) {
        const auto& d = partial_derivative(i, s);
        for (std::size_t r = 0; r < h.dim(); ++r) rows.append_row(d.apply(h.basis().row(r)));
    }
    return RSubspace::span(rows);
}

}  // namespace

SymbolicSystem descend(const SymbolicSystem& g) {
    if (g.cap() < 1) throw CapExceeded("descend: need at least one level above 0");
    std::vector<RSubspace> levels;
    for (int k = 0; k < g.cap(); ++k) levels.push_back(derivative_span(g.level(k + 1), g.n(), g.nu(), k + 1));
    return SymbolicSystem(g.n(), g.nu(), std::move(levels), std::nullopt);
}

DescendResult descend_fixpoint(const SymbolicSystem& g, int max_steps) {
    const int n = g.n(), nu = g.nu();
    if (!g.extendable()) {
        SymbolicSystem cur = g;
        for (int step = 1; step <= max_steps && cur.cap() >= 1; ++step) {
            SymbolicSystem next = descend(cur);
            bool same = true;
            for (int k = 0; k <= next.cap() && same; ++k) same = next.level(k) == cur.level(k);
            if (same) return {next, step, true};
            cur = std::move(next);
        }
        return {cur, max_steps, false};
    }
    const int window = g.cap();
    // cur = ∂^m g on levels 0..window
    std::vector<RSubspace> cur(g.levels().begin(), g.levels().end());
    for (int step = 1; step <= max_steps; ++step) {
        // ∂^{m} g at level window+1 is the span of all m-th derivatives of g_{window+1+m}
        auto ext = g.with_cap(window + step);
        RSubspace top = ext.level(window + step);
        for (int d = 0; d < step - 1; ++d) top = derivative_span(top, n, nu, window + step - d);
        std::vector<RSubspace> next;
        for (int k = 0; k < window; ++k) next.push_back(derivative_span(cur[k + 1], n, nu, k + 1));
        next.push_back(derivative_span(top, n, nu, window + 1));
        bool same = next == cur;
        cur = std::move(next);
        if (same) return {SymbolicSystem(n, nu, cur, std::nullopt), step, true};
    }
    return {SymbolicSystem(n, nu, cur, std::nullopt), max_steps, false};
}

}  // namespace spencer
