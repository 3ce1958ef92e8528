#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spencer/matrix.hpp"
#include "spencer/scalar.hpp"

namespace spencer {

/// Univariate polynomial, coefficients from degree 0 upward, no trailing zeros.
template <class F>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<F> c) : c_(std::move(c)) { trim(); }
    Poly(const F& constant) : c_{constant} { trim(); }  // NOLINT(google-explicit-constructor)

    static Poly x() { return Poly(std::vector<F>{F(0), F(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(int d) const { return d >= 0 && d <= degree() ? c_[static_cast<std::size_t>(d)] : F(0); }
    F lead() const { return is_zero() ? F(0) : c_.back(); }

    F operator()(const F& t) const {
        F acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<F> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<F> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<F> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// (quotient, remainder)
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        std::vector<F> r = c_;
        std::vector<F> q(std::max(0, degree() - d.degree() + 1));
        F inv = inverse(d.lead());
        for (int k = degree() - d.degree(); k >= 0; --k) {
            F f = r[static_cast<std::size_t>(k + d.degree())] * inv;
            q[static_cast<std::size_t>(k)] = f;
            if (spencer::is_zero(f)) continue;
            for (int j = 0; j <= d.degree(); ++j)
                r[static_cast<std::size_t>(k + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        return {Poly(std::move(q)), Poly(std::move(r))};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        F inv = inverse(lead());
        std::vector<F> c = c_;
        for (auto& x : c) x *= inv;
        return Poly(std::move(c));
    }

    Poly derivative() const {
        std::vector<F> c;
        for (int d = 1; d <= degree(); ++d) c.push_back(c_[static_cast<std::size_t>(d)] * F(d));
        return Poly(std::move(c));
    }

private:
    void trim() {
        while (!c_.empty() && spencer::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<F> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row; intended for the small sizes met here (ν ≤ 5).
template <class F>
Poly<F> poly_determinant(const std::vector<std::vector<Poly<F>>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return Poly<F>(F(1));
    if (n == 1) return m[0][0];
    Poly<F> acc;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<Poly<F>>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Poly<F>> row;
            for (std::size_t cc = 0; cc < n; ++cc)
                if (cc != c) row.push_back(m[r][cc]);
            minor.push_back(std::move(row));
        }
        auto term = m[0][c] * poly_determinant(minor);
        acc = (c % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

/// Characteristic polynomial det(x·I - A) by Faddeev-LeVerrier.
template <class F>
Poly<F> characteristic_polynomial(const Matrix<F>& a) {
    const std::size_t n = a.rows();
    std::vector<F> c(n + 1);
    c[n] = F(1);
    Matrix<F> m(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        Matrix<F> next = a * m;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        m = std::move(next);
        Matrix<F> am = a * m;
        F tr(0);
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -(tr / F(static_cast<long>(k)));
    }
    return Poly<F>(std::move(c));
}

Poly<Gaussian> to_gaussian(const Poly<Rational>& p);

/// Exact square root in Q(i) when it exists.
std::optional<Rational> rational_sqrt(const Rational& q);
std::optional<Gaussian> gaussian_sqrt(const Gaussian& z);

struct RootResult {
    std::vector<Gaussian> roots;  // verified exact roots, with multiplicity
    bool complete = false;        // every root of p was recovered in Q(i)
};

/// Roots in Q(i): exact formulas for degree ≤ 2, otherwise Durand-Kerner
/// candidates rounded by continued fractions and accepted only when p(root)
/// is exactly zero. Sorted by real part then imaginary part, descending.
RootResult gaussian_roots(const Poly<Gaussian>& p);

std::string to_string(const Poly<Rational>& p, const std::string& var = "t");
std::string to_string(const Poly<Gaussian>& p, const std::string& var = "t");

}  // namespace spencer
