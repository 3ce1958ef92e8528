#include <doctest.h>

#include <random>
#include <sstream>

#include "oracle.hpp"
#include "spencer/characteristics.hpp"
#include "spencer/dsl.hpp"
#include "spencer/restriction.hpp"

using namespace spencer;

namespace {

constexpr int kCases = 200;

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<Rational> random_vector(std::size_t d, std::mt19937_64& rng, int zero_odds = 2) {
    std::vector<Rational> v(d);
    for (auto& x : v)
        if (uniform(rng, 0, zero_odds) == 0) x = uniform(rng, -3, 3);
    return v;
}

RSubspace random_subspace(std::size_t ambient, std::size_t rows, std::mt19937_64& rng) {
    RMatrix m(0, ambient);
    for (std::size_t r = 0; r < rows; ++r) m.append_row(random_vector(ambient, rng, 1));
    return RSubspace::span(m);
}

RSubspace random_covectors(int n, int t, std::mt19937_64& rng) {
    RSubspace v(static_cast<std::size_t>(n));
    while (static_cast<int>(v.dim()) < t) v = random_subspace(static_cast<std::size_t>(n), static_cast<std::size_t>(t), rng);
    return v;
}

/// Random pure-order equation set with integer coefficients.
EquationSet random_equations(int n, int nu, int order, int count, std::mt19937_64& rng) {
    const char* names = "xyz";
    EquationSet e;
    for (int i = 0; i < n; ++i) e.vars.emplace_back(1, names[i]);
    for (int mu = 0; mu < nu; ++mu) e.unknowns.emplace_back(1, "uvw"[mu]);
    const auto& monos = monomials(n, order);
    while (static_cast<int>(e.equations.size()) < count) {
        Equation eq;
        eq.order = order;
        int terms = uniform(rng, 1, 3);
        for (int t = 0; t < terms; ++t) {
            Term term{Rational(uniform(rng, 1, 3) * (uniform(rng, 0, 1) ? 1 : -1)), uniform(rng, 0, nu - 1),
                      monos[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(monos.size()) - 1))]};
            bool dup = false;
            for (const auto& o : eq.terms) dup = dup || (o.unknown == term.unknown && o.alpha == term.alpha);
            if (!dup) eq.terms.push_back(term);
        }
        e.equations.push_back(eq);
    }
    return e;
}

struct RandomCase {
    EquationSet eqs;
    SymbolicSystem g;
    RSubspace vstar;
};

/// Pure-order systems with a strongly non-characteristic V*.
std::vector<RandomCase> strongly_nonchar_cases(std::uint64_t seed, int want) {
    std::mt19937_64 rng(seed);
    std::vector<RandomCase> out;
    for (int attempt = 0; attempt < 50 * want && static_cast<int>(out.size()) < want; ++attempt) {
        int n = uniform(rng, 2, 3), nu = uniform(rng, 1, 2), r = uniform(rng, 1, 2);
        if (n == 3 && nu == 2 && r == 2) r = 1;
        int top = nu * static_cast<int>(sym_dim(n, r));
        auto eqs = random_equations(n, nu, r, uniform(rng, top / 2, top - 1), rng);
        auto g = SymbolicSystem::from_equations(eqs, 5);
        auto ord = order_profile(g);
        if (ord.orders != std::vector<int>{r}) continue;
        auto v = random_covectors(n, uniform(rng, 1, n - 1), rng);
        if (!char_report(g, v).strongly_nonchar) continue;
        out.push_back({eqs, g, v});
    }
    return out;
}

std::string describe(const RandomCase& c) {
    std::ostringstream s;
    s << pretty_print(c.eqs) << "V* = ";
    for (std::size_t r = 0; r < c.vstar.dim(); ++r)
        s << (r ? ", " : "") << covector_string(c.vstar.basis().row_vector(r), c.eqs.vars);
    return s.str();
}

bool is_zero_vector(const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_zero(x); });
}

}  // namespace

TEST_SUITE("properties") {
    TEST_CASE("delta squares to zero") {
        std::mt19937_64 rng(101);
        for (int c = 0; c < kCases; ++c) {
            int n = uniform(rng, 1, 3), nu = uniform(rng, 1, 2), k = uniform(rng, 2, 5), j = uniform(rng, 0, n);
            GradedSlot s{n, nu, k, j};
            auto x = random_vector(slot_dim(s), rng);
            auto y = delta_map(s).apply(x);
            CHECK(y == oracle::delta(x, n, nu, k, j));
            auto z = delta_map(GradedSlot{n, nu, k - 1, std::min(j + 1, n)}).apply(y);
            if (j + 1 <= n) CHECK(is_zero_vector(z));
            VarMask mask = static_cast<VarMask>(uniform(rng, 0, (1 << n) - 1));
            auto ym = delta_map(s, mask).apply(x);
            if (j + 1 <= n) CHECK(is_zero_vector(delta_map(GradedSlot{n, nu, k - 1, j + 1}, mask).apply(ym)));
        }
    }

    TEST_CASE("prolongation composition law") {
        std::mt19937_64 rng(102);
        for (int c = 0; c < kCases; ++c) {
            int n = uniform(rng, 1, 3), nu = uniform(rng, 1, 2), k = uniform(rng, 1, 2);
            int a = uniform(rng, 1, 2), b = uniform(rng, 1, 5 - k - a > 0 ? std::min(2, 5 - k - a) : 1);
            if (k + a + b > 5) b = 0;
            auto d = slot_dim({n, nu, k, 0});
            auto h = random_subspace(d, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(d))), rng);
            auto direct = prolong_iterated(h, n, nu, k, a + b);
            auto stepwise = prolong_iterated(prolong_iterated(h, n, nu, k, a), n, nu, k + a, b);
            CHECK(direct == stepwise);
            CHECK(prolong_iterated(h, n, nu, k, 1) == prolong(h, n, nu, k));
        }
    }

    TEST_CASE("both prolongation characterizations agree") {
        std::mt19937_64 rng(103);
        for (int c = 0; c < kCases; ++c) {
            int n = uniform(rng, 1, 3), nu = uniform(rng, 1, 2), k = uniform(rng, 1, n == 3 ? 2 : 3);
            auto d = slot_dim({n, nu, k, 0});
            auto h = random_subspace(d, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(d))), rng);
            auto lib = prolong(h, n, nu, k);
            // {p : ∂^β p ∈ h for |β| = 1}
            CHECK(lib == oracle::prolong(h, n, nu, k, 1));
            // {p : δp ∈ h ⊗ T*}
            auto forms = RSubspace::span(oracle::with_forms(h, n, nu, k, 1));
            auto cond = forms.annihilator().basis() * delta_matrix(GradedSlot{n, nu, k + 1, 0});
            CHECK(lib == kernel(cond));
        }
    }

    TEST_CASE("Poincare lemma for free systems") {
        std::mt19937_64 rng(104);
        for (int c = 0; c < kCases; ++c) {
            int n = uniform(rng, 1, 3), nu = uniform(rng, 1, 2), i = uniform(rng, 0, 4), j = uniform(rng, 0, n);
            auto g = SymbolicSystem::free(n, nu, 5);
            std::size_t expect = i == 0 && j == 0 ? static_cast<std::size_t>(nu) : 0;
            CHECK(cohomology_dim(g, i, j) == expect);
            auto full = [&](int k) { return RSubspace::full(slot_dim({n, nu, k, 0})); };
            CHECK(oracle::cohomology(full(i), full(i + 1), n, nu, i, j) == static_cast<long>(expect));
        }
    }

    TEST_CASE("Grassmann identity") {
        std::mt19937_64 rng(105);
        for (int c = 0; c < kCases; ++c) {
            auto d = static_cast<std::size_t>(uniform(rng, 1, 12));
            auto a = random_subspace(d, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(d))), rng);
            auto b = random_subspace(d, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(d))), rng);
            auto s = sum(a, b);
            auto i = intersect(a, b);
            CHECK(s.dim() + i.dim() == a.dim() + b.dim());
            CHECK(s.contains(a));
            CHECK(s.contains(b));
            CHECK(a.contains(i));
            CHECK(b.contains(i));
        }
    }

    TEST_CASE("cohomology is invariant under change of basis") {
        std::mt19937_64 rng(106);
        for (int c = 0; c < kCases; ++c) {
            int n = uniform(rng, 2, 3), nu = uniform(rng, 1, 2), r = uniform(rng, 1, 2);
            if (n == 3 && nu == 2) r = 1;
            int top = nu * static_cast<int>(sym_dim(n, r));
            auto eqs = random_equations(n, nu, r, uniform(rng, 1, top - 1), rng);
            auto g = SymbolicSystem::from_equations(eqs, 4);
            auto p = random_basis(n, rng);
            auto h = change_coordinates(g, p);
            CHECK(cohomology_table(h, 3).nonzero() == cohomology_table(g, 3).nonzero());
            CHECK(order_profile(h).orders == order_profile(g).orders);
        }
    }

    TEST_CASE("non-characteristicity is inherited by prolongations") {
        std::mt19937_64 rng(107);
        std::size_t weak_seen = 0, strong_seen = 0;
        for (int c = 0; c < kCases; ++c) {
            int n = uniform(rng, 2, 3), nu = uniform(rng, 1, 2), k = uniform(rng, 1, 2);
            auto d = slot_dim({n, nu, k, 0});
            auto h = random_subspace(d, static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(d))), rng);
            auto v = random_covectors(n, uniform(rng, 1, n - 1), rng);
            auto h1 = prolong(h, n, nu, k);
            auto sub = RSubspace::span(
                random_subspace(h1.dim(), static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(h1.dim()))), rng)
                    .basis() *
                h1.basis());
            bool weak0 = strong_intersection(h, v, nu, k).dim() == 0;
            bool strong0 = weak_intersection(h, v, nu, k).dim() == 0;
            weak_seen += weak0;
            strong_seen += strong0;
            if (weak0) CHECK(strong_intersection(h1, v, nu, k + 1).dim() == 0);
            if (strong0) CHECK(weak_intersection(h1, v, nu, k + 1).dim() == 0);
            CHECK(strong_intersection(sub, v, nu, k + 1).dim() <= strong_intersection(h1, v, nu, k + 1).dim());
            CHECK(weak_intersection(sub, v, nu, k + 1).dim() <= weak_intersection(h1, v, nu, k + 1).dim());
        }
        CHECK(weak_seen > 0);
        CHECK(strong_seen > 0);
    }

    TEST_CASE("lemma 5 under strong non-characteristicity") {
        auto cases = strongly_nonchar_cases(108, kCases);
        CHECK(cases.size() == static_cast<std::size_t>(kCases));
        std::size_t bad = 0;
        for (const auto& c : cases) {
            auto r = lemma5_check(c.g, c.vstar, 3);
            if (r.mismatches) {
                ++bad;
                MESSAGE("lemma 5 mismatch on\n" << describe(c));
            }
        }
        CHECK(bad == 0);
    }

    TEST_CASE("m-acyclicity transfers to the restriction") {
        auto cases = strongly_nonchar_cases(109, kCases);
        CHECK(cases.size() == static_cast<std::size_t>(kCases));
        std::size_t violations = 0, lost = 0, fixed_violations = 0;
        for (const auto& c : cases) {
            for (int m = 1; m <= c.g.n(); ++m) {
                auto t = acyclicity_transfer(c.g, c.vstar, m, 4);
                REQUIRE(t.strongly_nonchar);
                REQUIRE(t.pure_order);
                fixed_violations += !t.agree_fixed();
                if (t.agree()) continue;
                lost += t.original.holds;
                if (violations++ == 0)
                    MESSAGE("first violation at m = " << m << ": g " << std::string(t.original.holds ? "is" : "is not")
                                                      << " m-acyclic, the restriction "
                                                      << std::string(t.restricted.holds ? "is" : "is not") << "\n"
                                                      << describe(c));
            }
        }
        MESSAGE("violations: " << violations << " (" << lost << " with g m-acyclic); against ord(g): " << fixed_violations);
        CHECK(lost == 0);
        CHECK(violations == 0);
    }
}
