#include <doctest.h>

#include "oracle.hpp"
#include "spencer/characteristics.hpp"
#include "spencer/restriction.hpp"

using namespace spencer;

namespace {

SymbolicSystem sys(const char* name, int cap = 6) { return SymbolicSystem::from_equations(oracle::golden(name), cap); }
SymbolicSystem sys_text(const char* text, int cap = 6) {
    return SymbolicSystem::from_equations(oracle::system_text(text), cap);
}
RSubspace cov(int n, std::vector<std::vector<Rational>> rows) { return RSubspace::span(static_cast<std::size_t>(n), rows); }

const char* kUxyUyy = "vars x y\nunknowns u\neq u_xy = 0\neq u_yy = 0\n";
const char* kUzLaplace = "vars x y z\nunknowns u\neq u_z = 0\neq u_xx + u_yy = 0\n";

}  // namespace

TEST_SUITE("restriction") {
    TEST_CASE("adapted frame") {
        auto vstar = cov(3, {{2, -3, 5}});
        auto f = adapted_frame(vstar);
        CHECK(f.s == 2);
        CHECK(f.t == 1);
        CHECK(rank(f.basis) == 3);
        // W vectors are annihilated by V*
        auto w = f.w_basis();
        for (std::size_t r = 0; r < w.rows(); ++r) {
            Rational s = 0;
            for (int i = 0; i < 3; ++i) s += w(r, i) * vstar.basis()(0, i);
            CHECK(is_zero(s));
        }
        CHECK_THROWS_AS(adapted_frame(RSubspace::full(3)), std::invalid_argument);
        auto g = adapted_frame(vstar, 11);
        CHECK(g.s == 2);
    }

    TEST_CASE("example 7 delta-prime cohomology and restriction") {
        auto g = sys("ex7");
        for (int i = 0; i <= 4; ++i) CHECK(g.dim(i) == binomial(3, i));
        auto st = setup_restriction(g, cov(3, {{2, -3, 5}}), 6);
        auto t = dprime_cohomology_table(st, 4);
        std::vector<CohomologyCell> expect{{0, 0, 1}, {1, 0, 1}, {1, 1, 2}, {2, 1, 2}, {2, 2, 1}, {3, 2, 1}};
        CHECK(t.nonzero() == expect);
        for (int i = 0; i <= 2; ++i)
            CHECK(sym_dim(2, i + 2) - st.restricted.dim(i + 2) == binomial(3 + i, i + 2) - binomial(3, i + 2));
    }

    TEST_CASE("delta-prime cohomology does not depend on the complement") {
        auto g = sys("ex7");
        auto vstar = cov(3, {{1, 1, 2}});
        auto a = setup_restriction(g, vstar, 6, 1);
        auto b = setup_restriction(g, vstar, 6, 2);
        auto c = setup_restriction(g, vstar, 6);
        CHECK(dprime_cohomology_table(a, 4).nonzero() == dprime_cohomology_table(b, 4).nonzero());
        CHECK(dprime_cohomology_table(a, 4).nonzero() == dprime_cohomology_table(c, 4).nonzero());
        for (int l = 1; l <= 5; ++l)
            for (int p = 0; p <= 1; ++p)
                for (int q = 0; q <= 2; ++q) CHECK(spectral_term(a, l, 1, p, q) == spectral_term(b, l, 1, p, q));
    }

    TEST_CASE("free system delta-prime cohomology") {
        auto g = SymbolicSystem::free(3, 2, 5);
        auto st = setup_restriction(g, cov(3, {{1, 0, 1}}), 5);
        auto t = dprime_cohomology_table(st, 4);
        for (int i = 0; i <= 4; ++i) {
            CHECK(t.dim(i, 0) == 2 * sym_dim(1, i));
            for (int j = 1; j <= 2; ++j) CHECK(t.dim(i, j) == 0);
        }
    }

    TEST_CASE("example 7 spectral tables") {
        auto g = sys("ex7");
        auto st = setup_restriction(g, cov(3, {{2, -3, 5}}), 6);
        auto dp = dprime_cohomology_table(st, 5);
        const int n = 3, t = 1;
        for (int l = 0; l <= 5; ++l)
            for (int p = 0; p <= t; ++p)
                for (int q = 0; p + q <= n && q <= 2; ++q) {
                    int i = l - p - q;
                    std::size_t e0 = i < 0 ? 0 : g.dim(i) * binomial(t, p) * binomial(n - t, q);
                    std::size_t e1 = i < 0 ? 0 : dp.dim(i, q) * binomial(t, p);
                    CHECK(spectral_term(st, l, 0, p, q) == e0);
                    CHECK(spectral_term(st, l, 1, p, q) == e1);
                }
        // l = 3: E_1^{0,1} = S²V*⊗W* and E_1^{1,1} = V*⊗W*⊗V*, killed by d_1
        CHECK(spectral_term(st, 3, 1, 0, 1) == 2);
        CHECK(spectral_term(st, 3, 1, 1, 1) == 2);
        CHECK(spectral_differential_rank(st, 3, 1, 0, 1) == 2);
        // l = 1 and l = 5: the antidiagonal pairs are killed as well
        CHECK(spectral_differential_rank(st, 1, 1, 0, 0) == spectral_term(st, 1, 1, 0, 0));
        CHECK(spectral_differential_rank(st, 5, 1, 0, 2) == spectral_term(st, 5, 1, 0, 2));
        for (int l : {1, 3, 5})
            for (int p = 0; p <= 1; ++p)
                for (int q = 0; q <= 2; ++q) CHECK(spectral_term(st, l, 2, p, q) == 0);
        // E_2 already computes H(g)
        for (int l = 0; l <= 5; ++l)
            for (int j = 0; j <= 3; ++j) {
                if (l - j < 0) continue;
                std::size_t sum = 0;
                for (int p = 0; p <= std::min(j, t); ++p) sum += spectral_term(st, l, 2, p, j - p);
                CHECK(sum == cohomology_dim(g, l - j, j));
            }
        CHECK(xi_space(st, 1, 2).dim() > 0);
    }

    TEST_CASE("involutive systems degenerate at E_1") {
        auto g = sys("uz");
        auto st = setup_restriction(g, cov(3, {{0, 0, 1}}), 6);
        for (int l = 1; l <= 4; ++l)
            for (int p = 0; p <= 1; ++p)
                for (int q = 1; q <= 2; ++q) CHECK(spectral_term(st, l, 1, p, q) == spectral_term(st, l, 2, p, q));
    }

    TEST_CASE("auxiliary space invariants") {
        struct Case {
            SymbolicSystem g;
            RSubspace vstar;
        };
        std::vector<Case> cases{{sys("ex7"), cov(3, {{2, -3, 5}})},
                                {sys("uz"), cov(3, {{0, 0, 1}})},
                                {sys_text(kUzLaplace), cov(3, {{0, 0, 1}})},
                                {sys("so2"), cov(2, {{1, 0}})},
                                {SymbolicSystem::free(3, 1, 6), cov(3, {{1, 0, 0}, {0, 1, 1}})}};
        for (auto& c : cases) {
            auto st = setup_restriction(c.g, c.vstar, 6);
            const int t = st.frame.t, nu = c.g.nu();
            for (int i = 0; i <= 3; ++i)
                for (int j = 0; j <= c.g.n(); ++j) {
                    auto a = aux_spaces(st, i, j);
                    if (i == 0 || j == 0) {
                        CHECK(a.upsilon_intro == 0);
                        CHECK(a.upsilon_sec4 == 0);
                        CHECK(a.theta == 0);
                    }
                    if (j == 0) CHECK(a.pi == 0);
                    if (i == 0 && j > 0) CHECK(a.pi == static_cast<std::size_t>(nu) * binomial(t, j));
                    if (i + j > 0) CHECK(a.s_ij == binomial(t + i + j - 1, i + j));
                    CHECK(a.upsilon_intro == a.upsilon_sec4);
                }
        }
    }

    TEST_CASE("xi vanishes in degree one under strong non-characteristicity") {
        for (auto [g, v] : std::vector<std::pair<SymbolicSystem, RSubspace>>{
                 {sys("ex7"), cov(3, {{2, -3, 5}})},
                 {sys("so2"), cov(2, {{1, 0}})},
                 {sys_text(kUxyUyy), cov(2, {{0, 1}})},
                 {sys("uz"), cov(3, {{0, 0, 1}})}}) {
            REQUIRE(char_report(g, v).strongly_nonchar);
            auto st = setup_restriction(g, v, 6);
            for (int i = 0; i <= 4; ++i) CHECK(xi_space(st, i, 1).dim() == 0);
        }
    }

    TEST_CASE("xi vanishes above r_min - 1 for involutive systems") {
        for (auto [g, v] : std::vector<std::pair<SymbolicSystem, RSubspace>>{
                 {sys("uz"), cov(3, {{0, 0, 1}})},
                 {sys_text(kUxyUyy), cov(2, {{0, 1}})},
                 {sys_text(kUzLaplace), cov(3, {{0, 0, 1}})}}) {
            REQUIRE(is_involutive(g, 0).involutive);
            auto st = setup_restriction(g, v, 6);
            int r = order_profile(g).r_min();
            for (int i = std::max(0, r - 1); i <= 4; ++i)
                for (int j = 0; j <= g.n(); ++j) CHECK(xi_space(st, i, j).dim() == 0);
        }
    }

    TEST_CASE("theorem 1 holds under its hypotheses") {
        auto er = equivalence_reduce(sys("uxy", 7), 2);
        std::vector<std::pair<SymbolicSystem, RSubspace>> cases{
            {sys("uz"), cov(3, {{0, 0, 1}})},
            {er, cov(2, {{3, 5}})},
            {sys_text(kUxyUyy), cov(2, {{0, 1}})},
            {sys_text(kUzLaplace), cov(3, {{0, 0, 1}})},
            {sys("wave"), RSubspace(2)}};
        for (auto& [g, v] : cases) {
            auto r = verify_thm1(g, v);
            CHECK(r.hypotheses.met());
            CHECK(r.mismatches == 0);
            CHECK(r.restricted_involutive);
            auto c = corollary_euler_check(g, v);
            CHECK(c.failures == 0);
            CHECK_FALSE(c.checks.empty());
        }
    }

    TEST_CASE("theorem 1 on the free system only has the (0,0) cell") {
        auto r = verify_thm1(SymbolicSystem::free(2, 1, 5), cov(2, {{1, 2}}));
        for (const auto& c : r.cells) {
            if (c.i == 0 && c.j == 0)
                CHECK(c.lhs == 1);
            else
                CHECK(c.lhs == 0);
        }
    }

    TEST_CASE("theorem 1 reports violated hypotheses") {
        auto uz = verify_thm1(sys("uz"), cov(3, {{1, 0, 0}}));
        CHECK_FALSE(uz.hypotheses.met());
        CHECK_FALSE(uz.hypotheses.strongly_nonchar);
        CHECK(uz.hypotheses.failing() == "V* is not strongly non-characteristic");

        auto so2 = verify_thm1(sys("so2"), cov(2, {{1, 0}}));
        CHECK_FALSE(so2.hypotheses.involutive);
        bool at_11 = false;
        for (const auto& c : so2.cells)
            if (c.i == 1 && c.j == 1) at_11 = !c.match();
        CHECK(at_11);
    }

    TEST_CASE("corollary at i = 0 for u_z = 0") {
        auto c = corollary_euler_check(sys("uz"), cov(3, {{0, 0, 1}}), 0, 0);
        CHECK(c.failures == 0);
        std::size_t i0 = 0;
        for (const auto& e : c.checks) i0 += e.i == 0;
        CHECK(i0 == 3);
    }

    TEST_CASE("lemma 5 case table") {
        std::vector<std::pair<SymbolicSystem, RSubspace>> cases{
            {sys("ex7"), cov(3, {{2, -3, 5}})},       {sys("so2"), cov(2, {{1, 0}})},
            {sys("uz"), cov(3, {{0, 0, 1}})},          {sys_text(kUxyUyy), cov(2, {{0, 1}})},
            {sys("cauchy_riemann"), cov(2, {{1, 0}})}};
        for (auto& [g, v] : cases) {
            auto r = lemma5_check(g, v, 4);
            REQUIRE(r.strongly_nonchar);
            CHECK(r.mismatches == 0);
            CHECK_FALSE(r.cells.empty());
        }
    }
}
