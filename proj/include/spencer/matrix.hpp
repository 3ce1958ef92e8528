#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spencer/scalar.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spencer {

/// Dense row-major matrix over an exact field.
template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    static Matrix from_rows(std::size_t cols, const std::vector<std::vector<F>>& rows) {
        Matrix m(0, cols);
        for (const auto& r : rows) m.append_row(r);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<F> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const F> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<F> row_vector(std::size_t r) const { return {row(r).begin(), row(r).end()}; }

    void append_row(std::span<const F> values) {
        if (values.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }
    void append_row(const std::vector<F>& values) { append_row(std::span<const F>(values)); }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    void truncate_rows(std::size_t n) {
        rows_ = n;
        data_.resize(rows_ * cols_);
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!spencer::is_zero(x)) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<F> data_;
};

template <class F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix<F> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const F& aik = a(i, k);
            if (is_zero(aik)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!is_zero(b(k, j))) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <class F>
std::vector<F> operator*(const Matrix<F>& a, std::span<const F> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
    std::vector<F> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (!is_zero(x[k]) && !is_zero(a(i, k))) y[i] += a(i, k) * x[k];
    return y;
}

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: width mismatch");
    Matrix<F> out = a;
    for (std::size_t r = 0; r < b.rows(); ++r) out.append_row(b.row(r));
    return out;
}

template <class G, class F>
Matrix<G> convert(const Matrix<F>& m) {
    Matrix<G> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = G(m(r, c));
    return out;
}

/// Reduced row echelon form of the row space of a matrix.
template <class F>
struct Rref {
    std::size_t rank = 0;
    Matrix<F> basis;  // rank x cols, pivot entries 1, zero elsewhere in pivot columns
    std::vector<std::size_t> pivots;
};

namespace detail {

template <class F>
void eliminate_row(Matrix<F>& m, std::size_t target, std::size_t pivot_row, std::size_t pivot_col,
                   const std::vector<std::size_t>& support) {
    F factor = m(target, pivot_col);
    if (is_zero(factor)) return;
    for (std::size_t c : support) {
        F t = factor * m(pivot_row, c);
        m(target, c) -= t;
    }
    m(target, pivot_col) = F(0);
}

// Normalizes the pivot row and returns the columns right of the pivot where it
// is nonzero; only those columns change during elimination.
template <class F>
std::vector<std::size_t> prepare_pivot(Matrix<F>& m, std::size_t r, std::size_t c) {
    F inv = inverse(m(r, c));
    std::vector<std::size_t> support;
    for (std::size_t cc = c + 1; cc < m.cols(); ++cc) {
        if (is_zero(m(r, cc))) continue;
        m(r, cc) *= inv;
        support.push_back(cc);
    }
    m(r, c) = F(1);
    return support;
}

template <class F>
bool find_pivot(Matrix<F>& m, std::size_t r, std::size_t c) {
    for (std::size_t p = r; p < m.rows(); ++p)
        if (!is_zero(m(p, c))) {
            m.swap_rows(p, r);
            return true;
        }
    return false;
}

template <class F>
Rref<F> finish(Matrix<F>&& m, std::size_t rank, std::vector<std::size_t>&& pivots) {
    m.truncate_rows(rank);
    return {rank, std::move(m), std::move(pivots)};
}

}  // namespace detail

/// Serial Gauss-Jordan elimination; the reference the parallel kernel is tested
/// against.
template <class F>
Rref<F> rref_serial(Matrix<F> m) {
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        if (!detail::find_pivot(m, r, c)) continue;
        auto support = detail::prepare_pivot(m, r, c);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r) detail::eliminate_row(m, i, r, c, support);
        pivots.push_back(c);
        ++r;
    }
    return detail::finish(std::move(m), r, std::move(pivots));
}

/// Gauss-Jordan elimination with the per-pivot row updates distributed over
/// OpenMP threads. Produces exactly the same result as rref_serial.
template <class F>
Rref<F> rref_parallel(Matrix<F> m) {
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        if (!detail::find_pivot(m, r, c)) continue;
        auto support = detail::prepare_pivot(m, r, c);
        const auto rows = static_cast<std::ptrdiff_t>(m.rows());
        const auto pivot_row = static_cast<std::ptrdiff_t>(r);
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < rows; ++i)
            if (i != pivot_row) detail::eliminate_row(m, static_cast<std::size_t>(i), r, c, support);
        pivots.push_back(c);
        ++r;
    }
    return detail::finish(std::move(m), r, std::move(pivots));
}

/// Entry count above which rref() dispatches to the OpenMP kernel.
inline constexpr std::size_t kParallelRrefThreshold = 64 * 64;

template <class F>
Rref<F> rref(Matrix<F> m) {
#ifdef _OPENMP
    if (m.rows() * m.cols() >= kParallelRrefThreshold && omp_get_max_threads() > 1)
        return rref_parallel(std::move(m));
#endif
    return rref_serial(std::move(m));
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank;
}

/// Basis (as rows) of {x : m x = 0}, one vector per free column, in the
/// standard "free variable = 1" normalization.
template <class F>
Matrix<F> null_space_basis(const Matrix<F>& m) {
    auto red = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : red.pivots) is_pivot[p] = true;
    Matrix<F> out(0, m.cols());
    std::vector<F> v(m.cols());
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        for (auto& x : v) x = F(0);
        v[free] = F(1);
        for (std::size_t k = 0; k < red.rank; ++k) v[red.pivots[k]] = -red.basis(k, free);
        out.append_row(v);
    }
    return out;
}

/// Coefficients x with Σ x_r · row_r(rows) = y, free coordinates set to zero;
/// nullopt when y is not in the row span.
template <class F>
std::optional<std::vector<F>> solve_left(const Matrix<F>& rows, std::span<const F> y) {
    if (y.size() != rows.cols()) throw std::invalid_argument("solve_left: width mismatch");
    const std::size_t m = rows.rows();
    Matrix<F> aug(rows.cols(), m + 1);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < rows.cols(); ++c) aug(c, r) = rows(r, c);
    for (std::size_t c = 0; c < rows.cols(); ++c) aug(c, m) = y[c];
    auto red = rref(std::move(aug));
    std::vector<F> x(m);
    for (std::size_t k = 0; k < red.rank; ++k) {
        if (red.pivots[k] == m) return std::nullopt;
        x[red.pivots[k]] = red.basis(k, m);
    }
    return x;
}

}  // namespace spencer
