#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace spencer {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (GMP canonical form).
using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline Rational inverse(const Rational& x) { return Rational(1) / x; }
inline Rational conj(const Rational& x) { return x; }

std::string to_string(const Rational& x);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Element a + b*i of the Gaussian rationals Q(i).
class Gaussian {
public:
    Gaussian() = default;
    Gaussian(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
    Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    Gaussian& operator+=(const Gaussian& o);
    Gaussian& operator-=(const Gaussian& o);
    Gaussian& operator*=(const Gaussian& o);
    Gaussian& operator/=(const Gaussian& o);

    friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
    friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
    friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
    friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
    friend Gaussian operator-(const Gaussian& a) { return {-a.re_, -a.im_}; }

    friend bool operator==(const Gaussian& a, const Gaussian& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }

private:
    Rational re_{0};
    Rational im_{0};
};

inline bool is_zero(const Gaussian& x) { return x.is_zero(); }
Gaussian inverse(const Gaussian& x);
inline Gaussian conj(const Gaussian& x) { return {x.re(), -x.im()}; }

/// "a", "b*i", "a + b*i", "a - b*i".
std::string to_string(const Gaussian& x);

std::ostream& operator<<(std::ostream& os, const Gaussian& x);

/// Lifting of a field element into Q(i); identity on Gaussians.
inline Gaussian to_gaussian(const Rational& x) { return Gaussian(x); }
inline const Gaussian& to_gaussian(const Gaussian& x) { return x; }

}  // namespace spencer
