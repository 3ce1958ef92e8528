#include "spencer/characteristics.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "spencer/cohomology.hpp"

namespace spencer {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::optional<std::vector<Rational>> first_vector(const RSubspace& s) {
    if (s.is_zero()) return std::nullopt;
    return s.basis().row_vector(0);
}

// Index of e_i in slot (1, 0) for unknown μ.
std::size_t linear_index(int n, int mu, int i) { return static_cast<std::size_t>(mu) * n + static_cast<std::size_t>(i); }

std::vector<Rational> simple_tensor(const std::vector<Rational>& beta, const std::vector<Rational>& xi) {
    const int n = static_cast<int>(beta.size());
    std::vector<Rational> out(beta.size() * xi.size());
    for (std::size_t mu = 0; mu < xi.size(); ++mu)
        for (int i = 0; i < n; ++i) out[linear_index(n, static_cast<int>(mu), i)] = beta[i] * xi[mu];
    return out;
}

GVector to_gvector(const std::vector<Rational>& v) {
    GVector out;
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

template <class F>
CovectorTest char_covector_impl(const SymbolicSystem& g, const std::vector<F>& v) {
    const int n = g.n(), nu = g.nu();
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("is_char_covector: covector has wrong length");
    if (std::all_of(v.begin(), v.end(), [](const F& x) { return is_zero(x); }))
        throw std::invalid_argument("is_char_covector: zero covector");
    CovectorTest out;
    out.k = char_level(g);
    const int k = out.k;
    const auto ann = convert<F>(g.level(k).annihilator().basis());
    auto power = power_of_covector<F>(std::span<const F>(v), k);
    const std::size_t sk = power.size();
    // column μ: ann · (v^k ⊗ e_μ)
    Matrix<F> m(ann.rows(), static_cast<std::size_t>(nu));
    for (std::size_t r = 0; r < ann.rows(); ++r)
        for (int mu = 0; mu < nu; ++mu) {
            F acc(0);
            for (std::size_t a = 0; a < sk; ++a)
                if (!is_zero(power[a])) acc += ann(r, static_cast<std::size_t>(mu) * sk + a) * power[a];
            m(r, static_cast<std::size_t>(mu)) = acc;
        }
    auto ker = null_space_basis(m);
    if (ker.rows() == 0) return out;
    out.characteristic = true;
    for (std::size_t mu = 0; mu < static_cast<std::size_t>(nu); ++mu) out.witness.push_back(to_gaussian(ker(0, mu)));
    return out;
}

bool contains_complex(const RSubspace& level, const GVector& x) {
    return convert<Gaussian>(level).contains(std::span<const Gaussian>(x));
}

}  // namespace

RSubspace weak_intersection(const RSubspace& h, const RSubspace& vstar, int nu, int k) {
    const int n = static_cast<int>(vstar.ambient_dim());
    if (k < 1) return RSubspace(h.ambient_dim());
    auto prod = subspace_product(vstar, RSubspace::full(slot_dim({n, nu, k - 1, 0})), n, nu, k);
    return intersect(h, prod);
}

RSubspace strong_intersection(const RSubspace& h, const RSubspace& vstar, int nu, int k) {
    return intersect(h, symmetric_power_tensor(vstar, nu, k));
}

int char_level(const SymbolicSystem& g) {
    auto ord = order_profile(g);
    return ord.orders.empty() ? 1 : ord.r_max();
}

int nonchar_level(const SymbolicSystem& g) {
    auto ord = order_profile(g);
    return ord.orders.empty() ? 1 : ord.r_min();
}

RMatrix annihilating_vectors(const RSubspace& vstar) { return vstar.annihilator().basis(); }

CharReport char_report(const SymbolicSystem& g, const RSubspace& vstar) {
    if (vstar.ambient_dim() != static_cast<std::size_t>(g.n()))
        throw std::invalid_argument("char_report: V* must be a subspace of T*");
    const int nu = g.nu();
    CharReport r;
    r.k_char = char_level(g);
    r.k_nonchar = nonchar_level(g);
    const auto& hc = g.level(r.k_char);
    const auto& hn = g.level(r.k_nonchar);
    r.weak_char_witness = first_vector(weak_intersection(hc, vstar, nu, r.k_char));
    r.strong_char_witness = first_vector(strong_intersection(hc, vstar, nu, r.k_char));
    r.strong_nonchar_obstruction = first_vector(weak_intersection(hn, vstar, nu, r.k_nonchar));
    r.weak_nonchar_obstruction = first_vector(strong_intersection(hn, vstar, nu, r.k_nonchar));
    r.weakly_char = r.weak_char_witness.has_value();
    r.strongly_char = r.strong_char_witness.has_value();
    r.strongly_nonchar = !r.strong_nonchar_obstruction.has_value();
    r.weakly_nonchar = !r.weak_nonchar_obstruction.has_value();

    auto w = annihilating_vectors(vstar);
    if (w.rows() == 0) {
        r.restriction_injective = hn.is_zero();
    } else {
        auto img = image(restriction_map(w, {g.n(), nu, r.k_nonchar, 0}), hn);
        r.restriction_injective = img.dim() == hn.dim();
    }
    r.isomorphism_consistent = r.restriction_injective == r.strongly_nonchar;
    return r;
}

GVector covector_power_tensor(const GVector& v, const GVector& w, int k) {
    auto power = power_of_covector<Gaussian>(std::span<const Gaussian>(v), k);
    GVector out(power.size() * w.size());
    for (std::size_t mu = 0; mu < w.size(); ++mu)
        for (std::size_t a = 0; a < power.size(); ++a) out[mu * power.size() + a] = power[a] * w[mu];
    return out;
}

CovectorTest is_char_covector(const SymbolicSystem& g, const std::vector<Rational>& v) {
    return char_covector_impl(g, v);
}

CovectorTest is_char_covector(const SymbolicSystem& g, const GVector& v) { return char_covector_impl(g, v); }

PencilResult pencil_char_search(const SymbolicSystem& g, const RSubspace& vstar) {
    const int n = g.n(), nu = g.nu();
    if (vstar.ambient_dim() != static_cast<std::size_t>(n))
        throw std::invalid_argument("pencil_char_search: V* must be a subspace of T*");
    PencilResult out;
    out.dim = static_cast<int>(vstar.dim());
    out.k = char_level(g);
    const int k = out.k;
    if (out.dim != 1 && out.dim != 2) throw std::invalid_argument("pencil_char_search: dim V* must be 1 or 2");

    auto a = vstar.basis().row_vector(0);
    if (out.dim == 1) {
        auto t = is_char_covector(g, a);
        out.exists = out.all_characteristic = t.characteristic;
        out.explicit_complete = true;
        if (t.characteristic) out.covectors.push_back(to_gvector(a));
        return out;
    }
    auto b = vstar.basis().row_vector(1);

    const auto ann = g.level(k).annihilator().basis();
    const std::size_t c = ann.rows();
    // A(τ)[r][μ] = ann_r((a + τ b)^k ⊗ e_μ); coefficient of τ^p uses C(k,p) a^{k-p} b^p.
    const std::size_t sk = sym_dim(n, k);
    std::vector<std::vector<Rational>> products;  // a^{k-p} b^p
    for (int p = 0; p <= k; ++p) {
        auto ap = power_of_covector<Rational>(std::span<const Rational>(a), k - p);
        auto bp = power_of_covector<Rational>(std::span<const Rational>(b), p);
        auto prod = sym_multiply<Rational>(n, ap, k - p, bp, p);
        for (auto& x : prod) x *= Rational(static_cast<long>(binomial(k, p)));
        products.push_back(std::move(prod));
    }
    std::vector<std::vector<Poly<Rational>>> A(c, std::vector<Poly<Rational>>(static_cast<std::size_t>(nu)));
    for (std::size_t r = 0; r < c; ++r)
        for (int mu = 0; mu < nu; ++mu) {
            std::vector<Rational> coeffs(static_cast<std::size_t>(k) + 1);
            for (int p = 0; p <= k; ++p)
                for (std::size_t x = 0; x < sk; ++x)
                    if (!is_zero(products[p][x]))
                        coeffs[p] += ann(r, static_cast<std::size_t>(mu) * sk + x) * products[p][x];
            A[r][static_cast<std::size_t>(mu)] = Poly<Rational>(std::move(coeffs));
        }

    if (c < static_cast<std::size_t>(nu)) {
        out.exists = out.all_characteristic = true;
    } else {
        const int hom = k * nu;
        Poly<Rational> running;
        int e_min = hom;
        bool any = false;
        std::vector<std::size_t> pick(static_cast<std::size_t>(nu));
        for (int i = 0; i < nu; ++i) pick[i] = static_cast<std::size_t>(i);
        while (true) {
            std::vector<std::vector<Poly<Rational>>> sub;
            for (auto r : pick) sub.push_back(A[r]);
            auto det = poly_determinant(sub);
            ++out.minors;
            if (!det.is_zero()) {
                any = true;
                running = gcd(running, det);
                e_min = std::min(e_min, hom - det.degree());
                if (running.degree() == 0 && e_min == 0) break;
            }
            // next ν-subset of rows in lex order
            int i = nu - 1;
            while (i >= 0 && pick[i] == c - static_cast<std::size_t>(nu - i)) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < nu; ++j) pick[j] = pick[j - 1] + 1;
        }
        if (!any) {
            out.exists = out.all_characteristic = true;
        } else {
            out.gcd = running;
            out.infinity_multiplicity = e_min;
            out.gcd_degree = running.degree() + e_min;
            out.exists = out.gcd_degree >= 1;
        }
    }

    if (out.all_characteristic) {
        out.covectors.push_back(to_gvector(a));
        out.explicit_complete = true;
    } else if (out.exists) {
        auto roots = gaussian_roots(to_gaussian(out.gcd));
        out.explicit_complete = roots.complete;
        std::vector<Gaussian> distinct;
        for (const auto& t : roots.roots)
            if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);
        for (const auto& t : distinct) {
            GVector v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) v[i] = Gaussian(a[i]) + t * Gaussian(b[i]);
            out.covectors.push_back(std::move(v));
        }
        if (out.infinity_multiplicity > 0) out.covectors.push_back(to_gvector(b));
    }
    if (!out.exists) out.explicit_complete = true;
    // Every reported covector is re-verified by exact membership.
    std::erase_if(out.covectors, [&](const GVector& v) {
        auto t = is_char_covector(g, v);
        return !t.characteristic || !contains_complex(g.level(k), covector_power_tensor(v, t.witness, k));
    });
    return out;
}

Thm2Report verify_thm2(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed, int samples) {
    Thm2Report r;
    r.dim = static_cast<int>(vstar.dim());
    auto inv = is_involutive(g, seed);
    r.involutive = inv.involutive;
    r.involutivity_decided = inv.decided;
    r.strongly_char = char_report(g, vstar).strongly_char;
    if (r.dim == 0) {
        r.exists_char_covector = false;
    } else if (r.dim <= 2) {
        r.pencil = pencil_char_search(g, vstar);
        r.exists_char_covector = r.pencil->exists;
        if (!r.pencil->covectors.empty()) r.covector = r.pencil->covectors.front();
    } else {
        r.partial = true;
        std::mt19937_64 rng(splitmix(seed ^ 0x7A2ULL));
        std::uniform_int_distribution<int> d(-10, 10);
        const auto& basis = vstar.basis();
        for (int s = 0; s < samples && !r.exists_char_covector; ++s) {
            RMatrix pair(0, basis.cols());
            for (int row = 0; row < 2; ++row) {
                std::vector<Rational> v(basis.cols());
                for (std::size_t q = 0; q < basis.rows(); ++q) {
                    Rational coef = d(rng);
                    for (std::size_t c = 0; c < basis.cols(); ++c) v[c] += coef * basis(q, c);
                }
                pair.append_row(v);
            }
            auto sub = RSubspace::span(pair);
            if (sub.dim() != 2) continue;
            ++r.subpencils_sampled;
            auto p = pencil_char_search(g, sub);
            if (p.exists) {
                r.exists_char_covector = true;
                if (!p.covectors.empty()) r.covector = p.covectors.front();
            }
        }
    }
    r.equivalence_holds = r.strongly_char == r.exists_char_covector;
    return r;
}

namespace {

// Common eigenvector of commuting operators ops[m] on F^r (column convention).
struct EigenSearch {
    bool ok = false;
    GVector vector;
    std::vector<Gaussian> eigenvalues;
    std::string failure;
    std::string poly;
};

EigenSearch common_eigenvector(const std::vector<Matrix<Gaussian>>& ops, std::size_t r) {
    EigenSearch out;
    Matrix<Gaussian> u = Matrix<Gaussian>::identity(r);  // rows span the current common invariant space
    for (const auto& op : ops) {
        const std::size_t d = u.rows();
        // restricted operator: column j = coordinates of op·u_j in the rows of u
        Matrix<Gaussian> restricted(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            auto uj = u.row_vector(j);
            auto img = op * std::span<const Gaussian>(uj);
            auto coords = solve_left(u, std::span<const Gaussian>(img));
            if (!coords) {
                out.failure = "operators do not commute on N'";
                return out;
            }
            for (std::size_t l = 0; l < d; ++l) restricted(l, j) = (*coords)[l];
        }
        auto chi = characteristic_polynomial(restricted);
        auto roots = gaussian_roots(chi);
        if (roots.roots.empty()) {
            out.failure = "eigenvalues outside Q(i)";
            out.poly = to_string(chi, "x");
            return out;
        }
        const Gaussian c = roots.roots.front();
        Matrix<Gaussian> shifted = restricted;
        for (std::size_t i = 0; i < d; ++i) shifted(i, i) -= c;
        auto ker = null_space_basis(shifted);
        Matrix<Gaussian> next(0, r);
        for (std::size_t q = 0; q < ker.rows(); ++q) {
            GVector row(r);
            for (std::size_t j = 0; j < d; ++j)
                if (!is_zero(ker(q, j)))
                    for (std::size_t x = 0; x < r; ++x) row[x] += ker(q, j) * u(j, x);
            next.append_row(row);
        }
        u = std::move(next);
        out.eigenvalues.push_back(c);
    }
    out.ok = true;
    out.vector = u.row_vector(0);
    return out;
}

}  // namespace

GuilleminResult guillemin_b_search(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed) {
    GuilleminResult out;
    const int n = g.n(), nu = g.nu();
    auto ord = order_profile(g);
    if (ord.orders != std::vector<int>{1}) {
        out.failure = "system is not pure first order";
        return out;
    }
    const auto& g1 = g.level(1);
    auto non_char = [&](const RSubspace& v) { return weak_intersection(g1, v, nu, 1).is_zero(); };
    if (vstar.is_zero() || non_char(vstar)) {
        out.failure = "V* is not strongly characteristic";
        return out;
    }

    // Descending search: seeded random subspaces of V* of decreasing dimension
    // until one is non-characteristic, then enlarge greedily so that it is
    // maximal among subspaces containing it.
    std::mt19937_64 rng(splitmix(seed ^ 0xB5ULL));
    std::uniform_int_distribution<int> d(-10, 10);
    const auto& vb = vstar.basis();
    const std::size_t dv = vb.rows();
    auto random_element = [&]() {
        std::vector<Rational> v(static_cast<std::size_t>(n));
        for (std::size_t q = 0; q < dv; ++q) {
            Rational coef = d(rng);
            for (int c = 0; c < n; ++c) v[c] += coef * vb(q, static_cast<std::size_t>(c));
        }
        return v;
    };
    RSubspace v0(static_cast<std::size_t>(n));
    bool found_v0 = false;
    for (std::size_t dim = dv - 1; dim >= 1 && !found_v0; --dim) {
        for (int attempt = 0; attempt < 8 && !found_v0; ++attempt) {
            RMatrix rows(0, static_cast<std::size_t>(n));
            for (std::size_t q = 0; q < dim; ++q) rows.append_row(random_element());
            auto cand = RSubspace::span(rows);
            if (cand.dim() == dim && non_char(cand)) {
                v0 = cand;
                found_v0 = true;
            }
        }
    }
    for (std::size_t q = 0; q < dv; ++q) {
        auto ext = sum(v0, RSubspace::span(static_cast<std::size_t>(n), {vb.row_vector(q)}));
        if (ext.dim() > v0.dim() && non_char(ext)) v0 = ext;
    }
    // ω: a basis vector of V* outside V0 with V0 + ω characteristic.
    for (std::size_t q = 0; q < dv && out.omega.empty(); ++q) {
        auto row = vb.row_vector(q);
        if (v0.contains(std::span<const Rational>(row))) continue;
        auto ext = sum(v0, RSubspace::span(static_cast<std::size_t>(n), {row}));
        if (!non_char(ext)) out.omega = row;
    }
    out.v0_basis = v0.basis();
    if (out.omega.empty()) {
        out.failure = "no characteristic extension of V0 inside V*";
        return out;
    }
    const auto& omega = out.omega;

    auto direct = is_char_covector(g, omega);
    if (direct.characteristic) {
        out.found = out.omega_characteristic = true;
        out.covector = to_gvector(omega);
        out.witness = direct.witness;
        return out;
    }

    // B: β_m ⊗ e_μ for β_m in V0 (row index m·ν + μ), then g_1.
    const std::size_t d0 = v0.dim();
    const std::size_t amb = slot_dim({n, nu, 1, 0});
    RMatrix b(0, amb);
    for (std::size_t m = 0; m < d0; ++m)
        for (int mu = 0; mu < nu; ++mu) {
            std::vector<Rational> e(static_cast<std::size_t>(nu));
            e[mu] = 1;
            b.append_row(simple_tensor(v0.basis().row_vector(m), e));
        }
    const RMatrix stacked = vstack(b, g1.basis());
    const auto q = RSubspace::span(stacked).annihilator().basis();
    RMatrix qo(q.rows(), static_cast<std::size_t>(nu));
    for (int mu = 0; mu < nu; ++mu) {
        std::vector<Rational> e(static_cast<std::size_t>(nu));
        e[mu] = 1;
        auto col = q * std::span<const Rational>(simple_tensor(omega, e));
        for (std::size_t r = 0; r < q.rows(); ++r) qo(r, static_cast<std::size_t>(mu)) = col[r];
    }
    auto nprime = kernel(qo);
    out.n_prime_dim = nprime.dim();
    if (nprime.is_zero()) {
        out.failure = "dim N' = 0";
        return out;
    }
    const std::size_t r = nprime.dim();
    const auto& nb = nprime.basis();

    std::vector<Matrix<Gaussian>> ops(d0, Matrix<Gaussian>(r, r));
    for (std::size_t j = 0; j < r; ++j) {
        auto target = simple_tensor(omega, nb.row_vector(j));
        auto coef = solve_left(stacked, std::span<const Rational>(target));
        if (!coef) {
            out.failure = "ω⊗N' is not in V0⊗N + g";
            return out;
        }
        for (std::size_t m = 0; m < d0; ++m) {
            std::vector<Rational> eta(static_cast<std::size_t>(nu));
            for (int mu = 0; mu < nu; ++mu) eta[mu] = (*coef)[m * nu + static_cast<std::size_t>(mu)];
            auto in_np = solve_left(nb, std::span<const Rational>(eta));
            if (!in_np) {
                out.failure = "λ does not map N' into V0⊗N'";
                return out;
            }
            for (std::size_t l = 0; l < r; ++l) ops[m](l, j) = Gaussian((*in_np)[l]);
        }
    }

    auto eig = common_eigenvector(ops, r);
    if (!eig.ok) {
        out.failure = eig.failure;
        out.minimal_poly = eig.poly;
        return out;
    }
    // ξ_0 in N, p = Σ c_m β_m, covector ω - p.
    GVector xi(static_cast<std::size_t>(nu));
    for (std::size_t l = 0; l < r; ++l)
        for (int mu = 0; mu < nu; ++mu) xi[mu] += eig.vector[l] * Gaussian(nb(l, static_cast<std::size_t>(mu)));
    GVector cov = to_gvector(omega);
    for (std::size_t m = 0; m < d0; ++m)
        for (int i = 0; i < n; ++i) cov[i] -= eig.eigenvalues[m] * Gaussian(v0.basis()(m, static_cast<std::size_t>(i)));
    if (!contains_complex(g1, covector_power_tensor(cov, xi, 1))) {
        out.failure = "candidate covector failed exact membership";
        return out;
    }
    out.found = true;
    out.covector = std::move(cov);
    out.witness = std::move(xi);
    return out;
}

}  // namespace spencer
