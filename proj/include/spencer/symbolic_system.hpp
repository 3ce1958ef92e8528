#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spencer/equations.hpp"
#include "spencer/subspace.hpp"
#include "spencer/tensor_basis.hpp"

namespace spencer {

using RSubspace = Subspace<Rational>;
using RMatrix = Matrix<Rational>;

/// Raised when a level beyond the degree cap is needed and cannot be derived.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// h^(1) = {p in S^{k+1}T*⊗N : ∂_i p ∈ h for every i}, for h ⊂ S^k T*⊗N.
RSubspace prolong(const RSubspace& h, int n, int nu, int k);
RSubspace prolong_iterated(const RSubspace& h, int n, int nu, int k, int l);

/// Graded family k ↦ g_k ⊂ S^k T*⊗N, held for 0 ≤ k ≤ cap.
///
/// `closed_from` = c means g_{k+1} = g_k^(1) for all k ≥ c, so the family
/// extends past the cap by prolongation. Systems without it (restrictions,
/// descended systems) are only known through the cap.
class SymbolicSystem {
public:
    SymbolicSystem() = default;
    SymbolicSystem(int n, int nu, std::vector<RSubspace> levels, std::optional<int> closed_from);

    static SymbolicSystem free(int n, int nu, int cap);
    /// Functionals by order: rows in the dual of slot (r, 0).
    static SymbolicSystem from_functionals(int n, int nu, const std::map<int, RMatrix>& functionals, int cap);
    static SymbolicSystem from_equations(const EquationSet& eqs, int cap);

    int n() const { return n_; }
    int nu() const { return nu_; }
    int cap() const { return static_cast<int>(levels_.size()) - 1; }
    std::optional<int> closed_from() const { return closed_from_; }
    bool extendable() const { return closed_from_.has_value(); }

    /// g_k; zero space for k < 0. Throws CapExceeded for k > cap.
    const RSubspace& level(int k) const;
    std::size_t dim(int k) const { return k < 0 ? 0 : level(k).dim(); }
    const std::vector<RSubspace>& levels() const { return levels_; }

    /// Same system with levels computed through `new_cap`; throws CapExceeded
    /// when the system is not closed and new_cap > cap.
    SymbolicSystem with_cap(int new_cap) const;

    const std::map<int, RMatrix>& generators() const { return generators_; }
    void set_generators(std::map<int, RMatrix> g) { generators_ = std::move(g); }

    friend bool operator==(const SymbolicSystem& a, const SymbolicSystem& b) {
        return a.n_ == b.n_ && a.nu_ == b.nu_ && a.levels_ == b.levels_;
    }

private:
    int n_ = 0;
    int nu_ = 1;
    std::vector<RSubspace> levels_;
    std::optional<int> closed_from_;
    std::map<int, RMatrix> generators_;
    static const RSubspace& empty_level();
};

/// Functional of one equation on slot (order, 0): coefficient a·α! at (μ, α).
std::vector<Rational> equation_functional(const Equation& eq, int n, int nu);

/// g_k ⊆ g_{k-1}^(1) for 1 ≤ k ≤ cap (and g_0 ⊆ N trivially).
bool satisfies_axiom(const SymbolicSystem& g);

struct OrderProfile {
    std::vector<int> orders;
    std::map<int, std::size_t> multiplicity;
    bool certified = false;  // no order can appear above the cap

    int r_min() const { return orders.empty() ? 0 : orders.front(); }
    int r_max() const { return orders.empty() ? 0 : orders.back(); }
    std::size_t codim() const {
        std::size_t c = 0;
        for (const auto& [r, m] : multiplicity) c += m;
        return c;
    }
    bool contains(int r) const;
};

OrderProfile order_profile(const SymbolicSystem& g);

/// g^{|k⟩}: full below k, g_k^{(i-k)} at level i ≥ k.
SymbolicSystem derived_system(const SymbolicSystem& g, int k);

/// Level-wise image of g under restriction to W = span(rows of w_basis).
SymbolicSystem restrict_system(const SymbolicSystem& g, const RMatrix& w_basis);

/// er_k: ĝ_m = {(∂^β p)_{|β|=k-1} : p ∈ g_{m+k-1}} over N' = S^{k-1}T*⊗N, with
/// N' index μ·dim S^{k-1} + rank(β).
SymbolicSystem equivalence_reduce(const SymbolicSystem& g, int k);
/// The map S^l T*⊗N -> S^{l-k+1}T*⊗N' behind er_k.
LinearMap<Rational> er_map(int n, int nu, int k, int l);

/// (∂g)_k = Σ_i ∂_i g_{k+1}. The result holds levels through cap - 1.
SymbolicSystem descend(const SymbolicSystem& g);

struct DescendResult {
    SymbolicSystem system;
    int steps = 0;
    bool converged = false;  // stable within cap
};

/// Iterates ∂ until the levels 0..cap stop changing. Uses levels of g up to
/// cap + steps + 1, so g must be closed; otherwise the window shrinks each step.
DescendResult descend_fixpoint(const SymbolicSystem& g, int max_steps = 64);

/// Random invertible change of coordinates x_i = Σ_j P(j, i) y_j applied to g.
SymbolicSystem change_coordinates(const SymbolicSystem& g, const RMatrix& p);

}  // namespace spencer
