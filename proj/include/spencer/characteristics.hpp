#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spencer/polynomial.hpp"
#include "spencer/symbolic_system.hpp"

namespace spencer {

using GVector = std::vector<Gaussian>;

/// h ∩ V*·S^{k-1}T*⊗N for h ⊂ S^k T*⊗N; V* is a subspace of T* (ambient n).
RSubspace weak_intersection(const RSubspace& h, const RSubspace& vstar, int nu, int k);
/// h ∩ S^k V*⊗N.
RSubspace strong_intersection(const RSubspace& h, const RSubspace& vstar, int nu, int k);

/// Level used by the characteristic tests (r_max) and by the
/// non-characteristic tests (r_min); 1 when g has no orders.
int char_level(const SymbolicSystem& g);
int nonchar_level(const SymbolicSystem& g);

struct CharReport {
    int k_char = 0;
    int k_nonchar = 0;
    bool weakly_char = false;
    bool strongly_char = false;
    bool weakly_nonchar = false;
    bool strongly_nonchar = false;
    std::optional<std::vector<Rational>> weak_char_witness;    // in g_{k_char} ∩ V*·S^{k-1}T*⊗N
    std::optional<std::vector<Rational>> strong_char_witness;  // in g_{k_char} ∩ S^k V*⊗N
    std::optional<std::vector<Rational>> weak_nonchar_obstruction;    // in g_{k_nonchar} ∩ S^k V*⊗N
    std::optional<std::vector<Rational>> strong_nonchar_obstruction;  // in g_{k_nonchar} ∩ V*·S^{k-1}T*⊗N
    bool restriction_injective = false;  // g_{k_nonchar} -> g̃_{k_nonchar}
    bool isomorphism_consistent = false;  // restriction_injective == strongly_nonchar
};

CharReport char_report(const SymbolicSystem& g, const RSubspace& vstar);

/// Rows spanning W = ann(V*) ⊂ T.
RMatrix annihilating_vectors(const RSubspace& vstar);

struct CovectorTest {
    bool characteristic = false;
    int k = 0;
    GVector witness;  // w ≠ 0 with v^k⊗w ∈ g_k ⊗ C
};

/// v^k⊗w ∈ g_k for some w ≠ 0, k = r_max. Throws std::invalid_argument for v = 0.
CovectorTest is_char_covector(const SymbolicSystem& g, const std::vector<Rational>& v);
CovectorTest is_char_covector(const SymbolicSystem& g, const GVector& v);

/// v^k ⊗ w as a vector of slot (k, 0) over Q(i).
GVector covector_power_tensor(const GVector& v, const GVector& w, int k);

struct PencilResult {
    int k = 0;
    int dim = 0;                       // dim V*
    bool exists = false;               // some nonzero v ∈ V*⊗C is characteristic
    bool all_characteristic = false;   // every v is
    int gcd_degree = 0;                // degree of the binary-form gcd of the maximal minors
    Poly<Rational> gcd;                // its dehomogenization at s = 1
    int infinity_multiplicity = 0;     // power of s dividing the gcd
    std::size_t minors = 0;
    std::vector<GVector> covectors;    // explicit characteristic covectors, each verified
    bool explicit_complete = false;    // every root of the gcd was found in Q(i)
};

/// Characteristic covectors in V* = span(a, b) through v = s·a + t·b. V* of
/// dimension 1 reduces to a single covector test. Throws std::invalid_argument
/// for dim V* ∉ {1, 2}.
PencilResult pencil_char_search(const SymbolicSystem& g, const RSubspace& vstar);

struct Thm2Report {
    int dim = 0;
    bool involutive = false;
    bool involutivity_decided = true;
    bool strongly_char = false;
    bool exists_char_covector = false;
    bool partial = false;  // dim V* > 2: only sampled 2-dimensional subpencils
    std::size_t subpencils_sampled = 0;
    bool equivalence_holds = false;
    std::optional<PencilResult> pencil;
    std::optional<GVector> covector;
};

Thm2Report verify_thm2(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed = 0,
                       int samples = 16);

struct GuilleminResult {
    bool found = false;
    GVector covector;   // ω - p
    GVector witness;    // ξ_0 with (ω - p)⊗ξ_0 ∈ g_1
    bool omega_characteristic = false;
    std::vector<Rational> omega;
    RMatrix v0_basis;
    std::size_t n_prime_dim = 0;
    std::string failure;       // empty when found
    std::string minimal_poly;  // unresolved factor when the eigenvalues leave Q(i)
};

/// Common-eigenvector construction for a first-order system and a strongly
/// characteristic V*. Never throws on mathematical failure; returns a
/// certificate instead.
GuilleminResult guillemin_b_search(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed = 0);

}  // namespace spencer
