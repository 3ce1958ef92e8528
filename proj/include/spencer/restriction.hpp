#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spencer/cohomology.hpp"

namespace spencer {

/// Coordinates y_1..y_n on T in which W = ann(V*) is spanned by the first s
/// basis vectors and V* by the last t coordinate covectors.
struct AdaptedFrame {
    int n = 0;
    int s = 0;  // dim W
    int t = 0;  // dim V*
    RMatrix basis;    // rows: W basis, then complement vectors
    RSubspace vstar;  // in the original coordinates

    VarMask w_mask() const { return all_vars(s); }
    VarMask v_mask() const { return all_vars(n) & ~all_vars(s); }
    RMatrix w_basis() const;
};

/// Complement vectors are standard basis vectors picked greedily, or seeded
/// random integer vectors when `seed` is given. Throws std::invalid_argument
/// when V* = T* or V* is not a subspace of T*.
AdaptedFrame adapted_frame(const RSubspace& vstar, std::optional<std::uint64_t> seed = std::nullopt);

struct RestrictionSetup {
    AdaptedFrame frame;
    SymbolicSystem adapted;     // g in the frame coordinates
    SymbolicSystem restricted;  // g̃ ⊂ S W* ⊗ N, coordinates y_1..y_s
};

/// `cap` levels of g are used (g is extended when closed).
RestrictionSetup setup_restriction(const SymbolicSystem& g, const RSubspace& vstar, int cap,
                                   std::optional<std::uint64_t> seed = std::nullopt);

/// H^{i,j}(g, δ′) with δ′ the differential along W.
CohomologyTable dprime_cohomology_table(const RestrictionSetup& r, int i_max);

/// Subspaces of slot (i, j) in frame coordinates.
RSubspace upsilon_intro(const AdaptedFrame& f, int nu, int i, int j);
RSubspace upsilon_sec4(const AdaptedFrame& f, int nu, int i, int j);
RSubspace theta_space(const AdaptedFrame& f, int nu, int i, int j);
RSubspace pi_space(const AdaptedFrame& f, int nu, int i, int j);
RSubspace xi_space(const RestrictionSetup& r, int i, int j);
/// Rank of the comultiplication S^{i+j}V* -> S^i V*⊗S^j V*.
std::size_t comultiplication_rank(int t, int i, int j);

struct AuxSpaces {
    int i = 0;
    int j = 0;
    std::size_t upsilon_intro = 0;
    std::size_t upsilon_sec4 = 0;
    std::size_t theta = 0;
    std::size_t pi = 0;
    std::size_t xi = 0;
    std::size_t s_ij = 0;
};
AuxSpaces aux_spaces(const RestrictionSetup& r, int i, int j);

/// Filtration piece g_{l-d}⊗span{dx_I : |I| = d, |I ∩ V| ≥ a} of the l-th
/// Spencer complex (a ≤ 0 means no condition).
RSubspace filtration_piece(const RestrictionSetup& r, int l, int a, int d);
/// Z_r^{p,q}: elements of F^{p,q} whose δ lies in F^{p+r,q-r+1}.
RSubspace spectral_cocycles(const RestrictionSetup& r, int l, int rr, int p, int q);
/// B_r^{p,q} = δ(F^{p-r,q+r-1}) ∩ F^{p,q}.
RSubspace spectral_coboundaries(const RestrictionSetup& r, int l, int rr, int p, int q);
/// dim E_r^{p,q} = dim Z_r - dim(Z_{r-1}^{p+1,q-1} + B_{r-1}^{p,q}).
std::size_t spectral_term(const RestrictionSetup& r, int l, int rr, int p, int q);
/// rank d_r^{p,q} = dim Z_r - dim(Z_{r+1} + Z_{r-1}^{p+1,q-1}).
std::size_t spectral_differential_rank(const RestrictionSetup& r, int l, int rr, int p, int q);

struct HypothesisStatus {
    bool strongly_nonchar = false;
    bool involutive = false;
    bool involutivity_decided = true;
    bool met() const { return strongly_nonchar && involutive; }
    std::string failing() const;  // "" when met
};

struct Thm1Cell {
    int i = 0;
    int j = 0;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    bool match() const { return lhs == rhs; }
};

struct Thm1Report {
    HypothesisStatus hypotheses;
    bool restricted_involutive = false;
    int s = 0;
    int t = 0;
    int r_min = 0;
    int i_max = 0;
    std::vector<Thm1Cell> cells;
    std::size_t mismatches = 0;
};

/// Cell-by-cell comparison of dim H^{i,j}(g) with
/// Σ_{q>0} H^{i,q}(g̃)·C(t,j-q) + [i+1 = r_min](Θ + Π) + [i = j = 0]·H^{0,0}(g̃)
/// for 0 ≤ i ≤ i_max (default: cap - 1), 0 ≤ j ≤ n.
Thm1Report verify_thm1(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed = 0,
                       std::optional<int> i_max = std::nullopt);

struct EulerCheck {
    int i = 0;
    int j = 0;
    std::vector<long> terms;  // T_0 .. T_{j+1}
    long alternating_sum = 0;
    bool holds() const { return alternating_sum == 0; }
};

struct CorollaryReport {
    HypothesisStatus hypotheses;
    std::vector<EulerCheck> checks;
    std::size_t failures = 0;
};

/// Euler characteristic of each Corollary sequence for r_min - 1 ≤ i ≤ i_max,
/// 1 ≤ j ≤ n.
CorollaryReport corollary_euler_check(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed = 0,
                                      std::optional<int> i_max = std::nullopt);

struct Lemma5Cell {
    int i = 0;
    int j = 0;
    long dprime = 0;
    long predicted = 0;
    std::string case_name;
    bool match() const { return dprime == predicted; }
};

struct Lemma5Report {
    bool strongly_nonchar = false;
    int k = 0;
    std::vector<Lemma5Cell> cells;
    std::size_t mismatches = 0;
};

Lemma5Report lemma5_check(const SymbolicSystem& g, const RSubspace& vstar, std::optional<int> i_max = std::nullopt);

struct AcyclicityTransfer {
    bool strongly_nonchar = false;
    bool pure_order = false;
    int m = 0;
    AcyclicityResult original;
    AcyclicityResult restricted;        // against ord(g̃)
    AcyclicityResult restricted_fixed;  // against ord(g)
    bool agree() const { return original.holds == restricted.holds; }
    bool agree_fixed() const { return original.holds == restricted_fixed.holds; }
};

/// m-acyclicity of g and of g̃.
AcyclicityTransfer acyclicity_transfer(const SymbolicSystem& g, const RSubspace& vstar, int m,
                                       std::optional<int> i_max = std::nullopt);

}  // namespace spencer
