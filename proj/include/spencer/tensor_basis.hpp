#pragma once

// Coordinates on the graded spaces S^k T* ⊗ N ⊗ Λ^j T*.
//
// Flat index of x^α ⊗ e_μ ⊗ dx_I in slot (k, j):
//     μ · (dimS · dimΛ) + rank_colex(α) · dimΛ + rank_lex(I)
// Polynomial convention: x^α is the ordinary monomial, so x · x = x².

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spencer/linear_map.hpp"
#include "spencer/scalar.hpp"
#include "spencer/subspace.hpp"

namespace spencer {

using MultiIndex = std::vector<int>;
using VarMask = std::uint32_t;

inline constexpr VarMask all_vars(int n) { return n >= 32 ? ~VarMask{0} : ((VarMask{1} << n) - 1); }

int degree(const MultiIndex& alpha);

std::size_t binomial(long n, long k);
/// dim S^k of an n-dimensional space; zero for k < 0.
std::size_t sym_dim(int n, int k);
std::size_t ext_dim(int n, int j);

/// All exponent vectors of total degree k in n variables, colexicographically
/// ordered (compare the last coordinate first).
const std::vector<MultiIndex>& monomials(int n, int k);
std::size_t monomial_rank(const MultiIndex& alpha);

/// All j-subsets of {0..n-1} as sorted tuples in lexicographic order.
const std::vector<std::vector<int>>& subsets(int n, int j);
std::size_t subset_rank(int n, const std::vector<int>& sorted_subset);
VarMask subset_mask(const std::vector<int>& subset);

struct GradedSlot {
    int n = 0;   // dim T
    int nu = 1;  // dim N
    int k = 0;   // symmetric degree
    int j = 0;   // exterior degree

    friend bool operator==(const GradedSlot&, const GradedSlot&) = default;
};

/// ν · C(n+k-1, k) · C(n, j), zero when k < 0 or j is out of range.
std::size_t slot_dim(const GradedSlot& s);

class BasisIndexer {
public:
    struct Coordinate {
        int mu;
        MultiIndex alpha;
        std::vector<int> forms;
    };

    explicit BasisIndexer(GradedSlot slot);

    std::size_t dim() const { return dim_; }
    std::size_t index(int mu, const MultiIndex& alpha, const std::vector<int>& forms) const;
    std::size_t index(int mu, std::size_t alpha_rank, std::size_t forms_rank) const {
        return static_cast<std::size_t>(mu) * sym_ * ext_ + alpha_rank * ext_ + forms_rank;
    }
    Coordinate decode(std::size_t flat) const;

    const GradedSlot& slot() const { return slot_; }
    std::size_t sym_count() const { return sym_; }
    std::size_t ext_count() const { return ext_; }

private:
    GradedSlot slot_;
    std::size_t sym_ = 0;
    std::size_t ext_ = 0;
    std::size_t dim_ = 0;
};

/// Spencer differential slot (k, j) -> slot (k-1, j+1):
///   δ(x^α ⊗ e ⊗ dx_I) = Σ_{i ∈ mask, α_i > 0} α_i x^{α-e_i} ⊗ e ⊗ (dx_i ∧ dx_I).
/// Restricting `mask` to a subset of variables gives the differential along
/// the corresponding coordinate subspace. Cached; safe to call concurrently.
const LinearMap<Rational>& delta_map(const GradedSlot& s, VarMask mask);
inline const LinearMap<Rational>& delta_map(const GradedSlot& s) { return delta_map(s, all_vars(s.n)); }
Matrix<Rational> delta_matrix(const GradedSlot& s);

/// ∂/∂x_var on the symmetric factor, slot (k, j) -> (k-1, j).
const LinearMap<Rational>& partial_derivative(int var, const GradedSlot& s);

/// δ_v = Σ v_i ∂/∂x_i on the symmetric factor, slot (k, j) -> (k-1, j).
LinearMap<Rational> directional_derivative(std::span<const Rational> v, const GradedSlot& s);

/// Multiplication by the linear form Σ c_i x_i, slot (k, j) -> (k+1, j).
LinearMap<Rational> multiply_by_covector(std::span<const Rational> covector, const GradedSlot& s);

/// Product of scalar polynomials in monomial coordinates: S^p × S^q -> S^{p+q}.
template <class F>
std::vector<F> sym_multiply(int n, std::span<const F> a, int p, std::span<const F> b, int q) {
    const auto& ma = monomials(n, p);
    const auto& mb = monomials(n, q);
    std::vector<F> out(sym_dim(n, p + q));
    MultiIndex sum(n);
    for (std::size_t x = 0; x < ma.size(); ++x) {
        if (is_zero(a[x])) continue;
        for (std::size_t y = 0; y < mb.size(); ++y) {
            if (is_zero(b[y])) continue;
            for (int i = 0; i < n; ++i) sum[i] = ma[x][i] + mb[y][i];
            out[monomial_rank(sum)] += a[x] * b[y];
        }
    }
    return out;
}

/// Coefficients of (Σ_i v_i x_i)^k in the monomial basis of S^k.
template <class F>
std::vector<F> power_of_covector(std::span<const F> v, int k) {
    const int n = static_cast<int>(v.size());
    std::vector<F> acc(1, F(1));
    for (int d = 0; d < k; ++d) acc = sym_multiply<F>(n, acc, d, v, 1);
    return acc;
}

/// Substitution x_i = Σ_m (w_m)_i t_m: slot (k, j) over T -> slot (k, j) over
/// W = span(w_1..w_s). Rows of `w_basis` are the vectors w_m; they must be
/// independent. Forms restrict through the s×s minors.
LinearMap<Rational> restriction_map(const Matrix<Rational>& w_basis, const GradedSlot& s);
Matrix<Rational> restriction_matrix(const Matrix<Rational>& w_basis, const GradedSlot& s);

/// span{v · p : v ∈ V*, p ∈ g} ⊂ S^k T* ⊗ N for g ⊂ S^{k-1} T* ⊗ N.
Subspace<Rational> subspace_product(const Subspace<Rational>& vstar, const Subspace<Rational>& g,
                                    int n, int nu, int k);

/// S^k V* ⊗ N as a subspace of slot (k, 0).
Subspace<Rational> symmetric_power_tensor(const Subspace<Rational>& vstar, int nu, int k);

/// Rows b ⊗ dx_I in slot (k, j) for every basis row b of `level` (a subspace of
/// slot (k, 0)) and every j-subset I whose mask passes `keep`.
template <class Keep>
Matrix<Rational> tensor_with_forms(const Matrix<Rational>& level, int n, int nu, int k, int j, Keep keep) {
    BasisIndexer src({n, nu, k, 0});
    BasisIndexer dst({n, nu, k, j});
    Matrix<Rational> out(0, dst.dim());
    const auto& subs = subsets(n, j);
    std::vector<Rational> row(dst.dim());
    for (std::size_t r = 0; r < level.rows(); ++r) {
        for (std::size_t I = 0; I < subs.size(); ++I) {
            if (!keep(subset_mask(subs[I]))) continue;
            for (auto& x : row) x = 0;
            for (std::size_t c = 0; c < src.dim(); ++c) {
                const Rational& v = level(r, c);
                if (is_zero(v)) continue;
                std::size_t mu = c / src.sym_count();
                std::size_t a = c % src.sym_count();
                row[dst.index(static_cast<int>(mu), a, I)] = v;
            }
            out.append_row(row);
        }
    }
    return out;
}

}  // namespace spencer
