#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "spencer/matrix.hpp"

namespace spencer {

/// Linear subspace of F^ambient held in canonical RREF. Two subspaces are equal
/// iff their basis matrices are identical.
template <class F>
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

    /// Row span of an arbitrary (possibly dependent) set of rows.
    static Subspace span(const Matrix<F>& rows) {
        Subspace s(rows.cols());
        auto red = rref(rows);
        s.basis_ = std::move(red.basis);
        s.pivots_ = std::move(red.pivots);
        return s;
    }

    static Subspace span(std::size_t ambient, const std::vector<std::vector<F>>& rows) {
        return span(Matrix<F>::from_rows(ambient, rows));
    }

    static Subspace full(std::size_t ambient) { return span(Matrix<F>::identity(ambient)); }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

    const Matrix<F>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Residual of v after reduction by the basis; zero iff v is in the span.
    std::vector<F> reduce(std::span<const F> v) const {
        if (v.size() != ambient_) throw std::invalid_argument("Subspace::reduce: ambient mismatch");
        std::vector<F> out(v.begin(), v.end());
        for (std::size_t k = 0; k < dim(); ++k) {
            F coef = out[pivots_[k]];
            if (spencer::is_zero(coef)) continue;
            auto row = basis_.row(k);
            for (std::size_t c = pivots_[k]; c < ambient_; ++c)
                if (!spencer::is_zero(row[c])) out[c] -= coef * row[c];
        }
        return out;
    }

    bool contains(std::span<const F> v) const {
        for (const auto& x : reduce(v))
            if (!spencer::is_zero(x)) return false;
        return true;
    }

    bool contains(const Subspace& other) const {
        if (other.ambient_ != ambient_) throw std::invalid_argument("Subspace::contains: ambient mismatch");
        for (std::size_t r = 0; r < other.dim(); ++r)
            if (!contains(other.basis_.row(r))) return false;
        return true;
    }

    /// {f : f(v) = 0 for all v in this}, in the dual coordinates.
    Subspace annihilator() const {
        if (dim() == 0) return full(ambient_);
        return span(null_space_basis(basis_));
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_ = 0;
    Matrix<F> basis_;
    std::vector<std::size_t> pivots_;
};

/// {x : m x = 0}; dimension cols(m) - rank(m).
template <class F>
Subspace<F> kernel(const Matrix<F>& m) {
    if (m.rows() == 0) return Subspace<F>::full(m.cols());
    auto basis = null_space_basis(m);
    if (basis.rows() == 0) return Subspace<F>(m.cols());
    return Subspace<F>::span(basis);
}

template <class F>
Subspace<F> sum(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("sum: ambient mismatch");
    return Subspace<F>::span(vstack(a.basis(), b.basis()));
}

template <class F>
Subspace<F> intersect(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("intersect: ambient mismatch");
    if (a.is_full()) return b;
    if (b.is_full()) return a;
    if (a.is_zero() || b.is_zero()) return Subspace<F>(a.ambient_dim());
    return kernel(vstack(a.annihilator().basis(), b.annihilator().basis()));
}

template <class F>
struct SumContainsQuotient {
    Subspace<F> sum;
    bool contains = false;     // b is contained in a
    std::size_t quotient_dim;  // dim a - dim (a ∩ b), i.e. dim a/b when b ⊆ a
};

template <class F>
SumContainsQuotient<F> sum_contains_quotient(const Subspace<F>& a, const Subspace<F>& b) {
    auto s = sum(a, b);
    // Grassmann: dim(a ∩ b) = dim a + dim b - dim(a + b)
    std::size_t cap = a.dim() + b.dim() - s.dim();
    bool contains = s.dim() == a.dim();
    return {std::move(s), contains, a.dim() - cap};
}

template <class G, class F>
Subspace<G> convert(const Subspace<F>& s) {
    return Subspace<G>::span(convert<G>(s.basis()));
}

}  // namespace spencer
