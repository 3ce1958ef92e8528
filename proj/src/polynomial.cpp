#include "spencer/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace spencer {

Poly<Gaussian> to_gaussian(const Poly<Rational>& p) {
    std::vector<Gaussian> c;
    for (const auto& x : p.coeffs()) c.emplace_back(x);
    return Poly<Gaussian>(std::move(c));
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
    return Rational(a, b);
}

std::optional<Gaussian> gaussian_sqrt(const Gaussian& z) {
    if (z.is_zero()) return Gaussian(0);
    auto modulus = rational_sqrt(z.norm());
    if (!modulus) return std::nullopt;
    // w = x + iy with x² = (|z| + a)/2, y² = (|z| - a)/2, sign(xy) = sign(b)
    Rational half(1, 2);
    auto x = rational_sqrt((*modulus + z.re()) * half);
    auto y = rational_sqrt((*modulus - z.re()) * half);
    if (!x || !y) return std::nullopt;
    Rational yy = sgn(z.im()) < 0 ? Rational(-*y) : *y;
    Gaussian w(*x, yy);
    if (w * w != z) return std::nullopt;
    return w;
}

namespace {

using cd = std::complex<double>;

// Best rational approximation with denominator ≤ limit.
Rational rationalize(double x, long limit = 1000000) {
    if (!std::isfinite(x)) return 0;
    long sign = x < 0 ? -1 : 1;
    x = std::fabs(x);
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        mpz_class ai(a);
        mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > limit) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = r - a;
        if (frac < 1e-12) break;
        r = 1.0 / frac;
    }
    return Rational(mpz_class(p1 * sign), q1);
}

cd to_cd(const Gaussian& g) { return {g.re().get_d(), g.im().get_d()}; }

std::vector<cd> durand_kerner(const Poly<Gaussian>& p) {
    const int d = p.degree();
    std::vector<cd> c;
    cd lead = to_cd(p.lead());
    for (int k = 0; k <= d; ++k) c.push_back(to_cd(p.coeff(k)) / lead);
    auto eval = [&](cd x) {
        cd acc = 0;
        for (int k = d; k >= 0; --k) acc = acc * x + c[static_cast<std::size_t>(k)];
        return acc;
    };
    std::vector<cd> z(static_cast<std::size_t>(d));
    cd seed(0.4, 0.9);
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = std::pow(seed, k);
    for (int it = 0; it < 2000; ++it) {
        double delta = 0;
        for (int k = 0; k < d; ++k) {
            cd denom = 1;
            for (int j = 0; j < d; ++j)
                if (j != k) denom *= z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)];
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            cd step = eval(z[static_cast<std::size_t>(k)]) / denom;
            z[static_cast<std::size_t>(k)] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-14) break;
    }
    return z;
}

bool root_order(const Gaussian& a, const Gaussian& b) {
    if (a.re() != b.re()) return a.re() > b.re();
    return a.im() > b.im();
}

}  // namespace

RootResult gaussian_roots(const Poly<Gaussian>& p0) {
    RootResult out;
    if (p0.degree() <= 0) {
        out.complete = p0.degree() == 0;
        return out;
    }
    Poly<Gaussian> p = p0.monic();
    // Peel off exact roots one at a time; each acceptance deflates p.
    while (p.degree() > 0) {
        std::optional<Gaussian> found;
        if (p.degree() == 1) {
            found = -p.coeff(0);
        } else if (p.degree() == 2) {
            Gaussian b = p.coeff(1), c = p.coeff(0);
            auto s = gaussian_sqrt(b * b - Gaussian(4) * c);
            if (s) found = (-b + *s) / Gaussian(2);
        }
        if (!found) {
            for (const auto& z : durand_kerner(p)) {
                Gaussian cand(rationalize(z.real()), rationalize(z.imag()));
                if (p(cand).is_zero()) {
                    found = cand;
                    break;
                }
            }
        }
        if (!found) break;
        out.roots.push_back(*found);
        p = p.divmod(Poly<Gaussian>(std::vector<Gaussian>{-*found, Gaussian(1)})).first;
    }
    out.complete = p.degree() == 0;
    std::sort(out.roots.begin(), out.roots.end(), root_order);
    return out;
}

namespace {

template <class F>
std::string poly_string(const Poly<F>& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int d = p.degree(); d >= 0; --d) {
        const F& c = p.coeffs()[static_cast<std::size_t>(d)];
        if (is_zero(c)) continue;
        std::string cs = to_string(c);
        bool compound = cs.find(' ') != std::string::npos;
        bool neg = !compound && cs[0] == '-';
        if (neg && !first) cs.erase(0, 1);
        if (!first) os << (neg ? " - " : " + ");
        first = false;
        if (neg && cs == "-1" && d > 0) cs = "-";
        if (d == 0) {
            os << (compound ? "(" + cs + ")" : cs);
            continue;
        }
        if (cs == "-")
            os << "-";
        else if (cs != "1")
            os << (compound ? "(" + cs + ")" : cs) << "*";
        os << var;
        if (d > 1) os << "^" << d;
    }
    return os.str();
}

}  // namespace

std::string to_string(const Poly<Rational>& p, const std::string& var) { return poly_string(p, var); }
std::string to_string(const Poly<Gaussian>& p, const std::string& var) { return poly_string(p, var); }

}  // namespace spencer
