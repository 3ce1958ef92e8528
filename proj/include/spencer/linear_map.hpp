#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spencer/subspace.hpp"

namespace spencer {

/// Sparse linear map F^cols -> F^rows stored column by column. The dense form
/// is rows x cols acting on column vectors.
template <class F>
class LinearMap {
public:
    using Entry = std::pair<std::size_t, F>;

    LinearMap() = default;
    LinearMap(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    void add(std::size_t target, std::size_t source, const F& value) {
        if (is_zero(value)) return;
        for (auto& [t, v] : columns_[source])
            if (t == target) {
                v += value;
                return;
            }
        columns_[source].emplace_back(target, value);
    }

    const std::vector<Entry>& column(std::size_t source) const { return columns_[source]; }

    std::vector<F> apply(std::span<const F> x) const {
        std::vector<F> y(rows_);
        for (std::size_t s = 0; s < x.size(); ++s) {
            if (is_zero(x[s])) continue;
            for (const auto& [t, v] : columns_[s]) y[t] += v * x[s];
        }
        return y;
    }

    /// Row vector f -> f ∘ this.
    std::vector<F> pullback(std::span<const F> functional) const {
        std::vector<F> out(cols());
        for (std::size_t s = 0; s < cols(); ++s)
            for (const auto& [t, v] : columns_[s])
                if (!is_zero(functional[t])) out[s] += functional[t] * v;
        return out;
    }

    Matrix<F> to_dense() const {
        Matrix<F> m(rows_, cols());
        for (std::size_t s = 0; s < cols(); ++s)
            for (const auto& [t, v] : columns_[s]) m(t, s) = v;
        return m;
    }

    /// this ∘ inner
    LinearMap compose(const LinearMap& inner) const {
        LinearMap out(rows_, inner.cols());
        for (std::size_t s = 0; s < inner.cols(); ++s)
            for (const auto& [mid, a] : inner.column(s))
                for (const auto& [t, b] : columns_[mid]) out.add(t, s, b * a);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::vector<std::vector<Entry>> columns_;
};

/// Images of the rows of a matrix.
template <class F>
Matrix<F> apply_rows(const LinearMap<F>& map, const Matrix<F>& rows) {
    Matrix<F> out(0, map.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) out.append_row(map.apply(rows.row(r)));
    return out;
}

template <class F>
Subspace<F> image(const LinearMap<F>& map, const Subspace<F>& s) {
    if (s.dim() == 0) return Subspace<F>(map.rows());
    return Subspace<F>::span(apply_rows(map, s.basis()));
}

/// Combinations c of the rows of `rows` with c * rows = 0, mapped back through
/// `back` (c -> c * back).
template <class F>
Matrix<F> left_kernel_combinations(const Matrix<F>& rows, const Matrix<F>& back) {
    auto coeffs = null_space_basis(rows.transposed());
    return coeffs * back;
}

/// {v in s : map(v) = 0}
template <class F>
Subspace<F> kernel_on(const LinearMap<F>& map, const Subspace<F>& s) {
    if (s.dim() == 0) return s;
    auto images = apply_rows(map, s.basis());
    auto combos = left_kernel_combinations(images, s.basis());
    if (combos.rows() == 0) return Subspace<F>(s.ambient_dim());
    return Subspace<F>::span(combos);
}

/// {v in s : f(v) = 0 for every row f of `functionals`}
template <class F>
Subspace<F> kernel_on(const Matrix<F>& functionals, const Subspace<F>& s) {
    if (s.dim() == 0 || functionals.rows() == 0) return s;
    Matrix<F> values = s.basis() * functionals.transposed();
    auto combos = left_kernel_combinations(values, s.basis());
    if (combos.rows() == 0) return Subspace<F>(s.ambient_dim());
    return Subspace<F>::span(combos);
}

/// {v in s : map(v) ∈ target}
template <class F>
Subspace<F> preimage_on(const LinearMap<F>& map, const Subspace<F>& s, const Subspace<F>& target) {
    if (target.is_full()) return s;
    const auto ann = target.annihilator().basis();
    Matrix<F> pulled(0, map.cols());
    for (std::size_t r = 0; r < ann.rows(); ++r) pulled.append_row(map.pullback(ann.row(r)));
    return kernel_on(pulled, s);
}

template <class F>
std::size_t image_rank(const LinearMap<F>& map, const Matrix<F>& rows) {
    if (rows.rows() == 0) return 0;
    return rank(apply_rows(map, rows));
}

}  // namespace spencer
