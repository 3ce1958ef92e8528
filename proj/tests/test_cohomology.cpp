#include <doctest.h>

#include "oracle.hpp"
#include "spencer/cohomology.hpp"

using namespace spencer;

namespace {

std::vector<CohomologyCell> oracle_nonzero(const EquationSet& eqs, int i_max) {
    std::vector<CohomologyCell> out;
    for (int i = 0; i <= i_max; ++i)
        for (int j = 0; j <= eqs.n(); ++j) {
            long d = oracle::cohomology(eqs, i, j);
            if (d) out.push_back({i, j, static_cast<std::size_t>(d)});
        }
    return out;
}

SymbolicSystem sys(const char* name, int cap = 6) { return SymbolicSystem::from_equations(oracle::golden(name), cap); }

}  // namespace

TEST_SUITE("spencer_cohomology") {
    TEST_CASE("free systems are acyclic") {
        for (int n = 1; n <= 3; ++n)
            for (int nu = 1; nu <= 2; ++nu) {
                auto t = cohomology_table(SymbolicSystem::free(n, nu, 5), 4);
                auto nz = t.nonzero();
                REQUIRE(nz.size() == 1);
                CHECK(nz[0] == CohomologyCell{0, 0, static_cast<std::size_t>(nu)});
            }
    }

    TEST_CASE("golden tables agree with the reference") {
        for (auto name : {"ex1", "ex2", "so2", "wave", "laplace", "ex6", "uz", "uxy", "cauchy_riemann"}) {
            auto eqs = oracle::golden(name);
            auto t = cohomology_table(SymbolicSystem::from_equations(eqs, 6), 4);
            CHECK_MESSAGE(t.nonzero() == oracle_nonzero(eqs, 4), name);
        }
    }

    TEST_CASE("example 1") {
        auto t = cohomology_table(sys("ex1"), 4);
        std::vector<CohomologyCell> expect{{0, 0, 2}, {1, 1, 2}, {2, 1, 1}, {2, 2, 1}};
        CHECK(t.nonzero() == expect);
        CHECK(property_I1(t));
        CHECK(property_I2(sys("ex1"), 0).holds);
        auto d2 = cohomology_table(derived_system(sys("ex1"), 2), 4);
        CHECK(d2.dim(2, 2) == 1);
    }

    TEST_CASE("so(2)") {
        auto t = cohomology_table(sys("so2"), 4);
        std::vector<CohomologyCell> expect{{0, 0, 2}, {0, 1, 3}, {1, 2, 1}};
        CHECK(t.nonzero() == expect);
        CHECK_FALSE(property_I1(t));
        CHECK_FALSE(is_involutive(sys("so2"), 0).involutive);
    }

    TEST_CASE("example 6 diagonal") {
        auto t = cohomology_table(sys("ex6"), 4);
        for (int i = 0; i <= 3; ++i) CHECK(t.dim(i, i) == binomial(3, i));
    }

    TEST_CASE("cartan test") {
        auto free = SymbolicSystem::free(3, 1, 5);
        for (int k = 1; k <= 3; ++k) CHECK(cartan_test(free, k, 0).verdict == CartanVerdict::Involutive);
        CHECK(cartan_test(sys("wave"), 2, 0).verdict == CartanVerdict::Involutive);
        auto codim1 = oracle::system_text("vars x y z\nunknowns u\neq u_xx + 2 u_yz - u_zz = 0\n");
        CHECK(cartan_test(SymbolicSystem::from_equations(codim1, 5), 2, 7).verdict == CartanVerdict::Involutive);
        auto g2 = derived_system(sys("ex1"), 2);
        CHECK(cartan_test(g2, 2, 0).verdict == CartanVerdict::NotInvolutive);
    }

    TEST_CASE("involutivity verdicts") {
        CHECK(is_involutive(sys("ex2"), 0).involutive);
        CHECK(is_involutive(sys("wave"), 0).involutive);
        CHECK(is_involutive(sys("uz"), 0).involutive);
        auto ex1 = is_involutive(sys("ex1"), 0);
        CHECK_FALSE(ex1.involutive);
        CHECK(ex1.decided);
        bool order2_fails = false;
        for (const auto& oc : ex1.per_order)
            if (oc.k == 2) order2_fails = oc.cartan.verdict == CartanVerdict::NotInvolutive && !oc.cohomology_vanishes;
        CHECK(order2_fails);
    }

    TEST_CASE("property I3 is not found for example 2") {
        auto r = property_I3(sys("ex2", 5), 0, 50);
        CHECK(r.outcome == SearchOutcome::NotFoundWithinBudget);
        CHECK(r.coordinate_splittings_tried > 0);
    }

    TEST_CASE("properties on the free system") {
        auto g = SymbolicSystem::free(2, 1, 5);
        CHECK(property_I1(cohomology_table(g, 4)));
        CHECK(property_I2(g, 0).holds);
    }

    TEST_CASE("acyclicity") {
        for (auto name : {"ex2", "wave", "uz"}) {
            auto g = sys(name);
            auto t = cohomology_table(g, 5);
            CHECK(acyclicity(t, order_profile(g), g.n(), false).holds);
        }
        auto free = SymbolicSystem::free(3, 1, 5);
        for (int m = 0; m <= 3; ++m) CHECK(acyclicity(cohomology_table(free, 4), order_profile(free), m, false).holds);
        // Example 1: every nonzero group sits at i ∈ ord - 1 = {1, 2} or at (0, 0)
        auto ex1 = sys("ex1");
        auto t1 = cohomology_table(ex1, 4);
        for (int m = 0; m <= 2; ++m) CHECK(acyclicity(t1, order_profile(ex1), m, false).holds);
        // so(2): H^{1,2} breaks 2-acyclicity since ord - 1 = {0}
        auto so2 = sys("so2");
        auto t2 = cohomology_table(so2, 4);
        CHECK(acyclicity(t2, order_profile(so2), 1, false).holds);
        auto a2 = acyclicity(t2, order_profile(so2), 2, false);
        CHECK_FALSE(a2.holds);
        REQUIRE(a2.violations.size() == 1);
        CHECK(a2.violations[0] == CohomologyCell{1, 2, 1});
    }

    TEST_CASE("masked cohomology on a coordinate split") {
        // free system, δ along the first two of three axes: H^{i,0} = S^i of the third axis
        auto g = SymbolicSystem::free(3, 2, 5);
        auto t = masked_cohomology_table(g, 4, all_vars(2), "delta' along W");
        for (int i = 0; i <= 4; ++i) {
            CHECK(t.dim(i, 0) == 2 * sym_dim(1, i));
            for (int j = 1; j <= 2; ++j) CHECK(t.dim(i, j) == 0);
        }
    }

    TEST_CASE("cap exceeded for unknown levels") {
        auto gt = restrict_system(sys("uxy", 3), RMatrix::from_rows(2, {{1, 0}}));
        CHECK_THROWS_AS(cohomology_dim(gt, 3, 1), CapExceeded);
    }
}
