#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spencer/symbolic_system.hpp"

namespace spencer {

/// Rank of δ restricted to derivatives in `derivs`, applied to level ⊗ Λ^j,
/// where the forms dx_I range over subsets of `forms`. `level` lives in slot
/// (i, 0).
std::size_t delta_rank(const RSubspace& level, int n, int nu, int i, int j, VarMask forms, VarMask derivs);

/// Basis of level ⊗ Λ^j with forms from subsets of `forms`, in slot (i, j).
RMatrix level_tensor_forms(const RSubspace& level, int n, int nu, int i, int j, VarMask forms);

struct CohomologyCell {
    int i = 0;
    int j = 0;
    std::size_t dim = 0;

    friend bool operator==(const CohomologyCell&, const CohomologyCell&) = default;
};

/// (i, j) ↦ dim H^{i,j} for 0 ≤ i ≤ i_max, 0 ≤ j ≤ number of form variables.
struct CohomologyTable {
    int n = 0;
    int i_max = 0;
    std::string source;  // "delta", "delta' along W", ...
    std::vector<std::size_t> dims;  // row-major (i, j)

    std::size_t dim(int i, int j) const;
    std::vector<CohomologyCell> nonzero() const;
};

/// H^{i,j}(g). Extends closed systems as needed; throws CapExceeded when level
/// i+1 is unknown.
std::size_t cohomology_dim(const SymbolicSystem& g, int i, int j);
/// Cells are independent and evaluated concurrently.
CohomologyTable cohomology_table(const SymbolicSystem& g, int i_max);

/// Cohomology of the complex (g_• ⊗ Λ^• U*, δ_U) where U is spanned by the
/// coordinate vectors in `mask`. With mask = first s coordinates of an adapted
/// frame this is the δ′-cohomology along W.
std::size_t masked_cohomology_dim(const SymbolicSystem& g, int i, int j, VarMask mask);
CohomologyTable masked_cohomology_table(const SymbolicSystem& g, int i_max, VarMask mask, std::string source);

/// Integer matrix with entries in [-10, 10] whose rows form a basis of Q^n.
RMatrix random_basis(int n, std::mt19937_64& rng);

/// For each step i, whether δ_{v_i} maps source ∩ S ann⟨v_1..v_{i-1}⟩ onto
/// target ∩ S ann⟨v_1..v_{i-1}⟩. `source` lives in slot (k, 0), `target` in
/// slot (k-1, 0). Rows of `basis` are v_1..v_n.
struct SurjectivityChain {
    std::vector<bool> surjective;
    std::vector<std::size_t> source_dims;
    std::vector<std::size_t> target_dims;
    std::vector<std::size_t> image_dims;

    bool all() const;
};
SurjectivityChain surjectivity_chain(const RSubspace& source, const RSubspace& target, int n, int nu, int k,
                                     const RMatrix& basis);

enum class CartanVerdict { Involutive, NotInvolutive, BasisDegenerate };
std::string to_string(CartanVerdict v);

struct CartanResult {
    CartanVerdict verdict = CartanVerdict::BasisDegenerate;
    int k = 0;
    std::uint64_t seed = 0;
    int attempts = 0;
    RMatrix basis;            // passing basis, or the last one tried
    SurjectivityChain chain;  // for that basis
};

/// Cartan's test for g_k: δ_{v_i} : g_k^(1) ∩ … -> g_k ∩ … surjective for all
/// i, on up to `retries` seeded random bases.
CartanResult cartan_test(const SymbolicSystem& g, int k, std::uint64_t seed, int retries = 5);

struct OrderCheck {
    int k = 0;
    CartanResult cartan;
    bool cohomology_vanishes = true;  // H^{i,j}(g^{|k⟩}) = 0 for k ≤ i ≤ window
    int window = 0;
};

struct InvolutivityResult {
    bool involutive = false;
    bool decided = true;  // false when some order was basis-degenerate
    bool certified = false;
    std::vector<OrderCheck> per_order;
};

InvolutivityResult is_involutive(const SymbolicSystem& g, std::uint64_t seed);

/// H^{i,1} = 0 ⇒ H^{i,j} = 0 for j > 1, for i within the table.
bool property_I1(const CohomologyTable& t);

struct PropertyI2Result {
    bool holds = true;
    std::vector<int> failing_levels;
};
PropertyI2Result property_I2(const SymbolicSystem& g, std::uint64_t seed, int retries = 5);

/// Basis v_1..v_n (rows) with summand index per vector (0-based, one summand
/// per order in increasing order).
struct Splitting {
    RMatrix basis;
    std::vector<int> summand;
};

bool check_I3(const SymbolicSystem& g, const Splitting& s);

enum class SearchOutcome { Found, NotFoundWithinBudget };
std::string to_string(SearchOutcome o);

struct PropertyI3Result {
    SearchOutcome outcome = SearchOutcome::NotFoundWithinBudget;
    std::optional<Splitting> witness;
    std::size_t coordinate_splittings_tried = 0;
    std::size_t random_splittings_tried = 0;
};

/// Exhausts coordinate splittings (every assignment of axes to summands and
/// every ordering), then `random_budget` seeded random ones.
PropertyI3Result property_I3(const SymbolicSystem& g, std::uint64_t seed, int random_budget = 200);

struct AcyclicityResult {
    bool holds = true;
    std::vector<CohomologyCell> violations;
};

/// m-acyclic: H^{i,j} = 0 for i ∉ ord(g) - 1, 0 ≤ j ≤ m, (i, j) ≠ (0, 0).
/// co: H^{i,j} = 0 for i ≥ r_min and j ≥ n - m.
AcyclicityResult acyclicity(const CohomologyTable& t, const OrderProfile& ord, int m, bool co);

}  // namespace spencer
