#include "spencer/scalar.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace spencer {

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(std::string_view text) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        neg = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::string& out) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("expected digits in rational '" + std::string(text) + "'");
        out.assign(text.substr(start, pos - start));
    };
    std::string num;
    std::string den = "1";
    digits(num);
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        digits(den);
    }
    if (pos != text.size()) throw std::invalid_argument("trailing characters in rational '" + std::string(text) + "'");
    mpz_class d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in rational '" + std::string(text) + "'");
    Rational r(mpz_class(num), d);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

Gaussian& Gaussian::operator+=(const Gaussian& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Gaussian& Gaussian::operator-=(const Gaussian& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Gaussian& Gaussian::operator*=(const Gaussian& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Gaussian& Gaussian::operator/=(const Gaussian& o) {
    if (o.is_zero()) throw std::domain_error("division by zero in Q(i)");
    return *this *= inverse(o);
}

Gaussian inverse(const Gaussian& x) {
    if (x.is_zero()) throw std::domain_error("inverse of zero in Q(i)");
    Rational n = x.norm();
    return {x.re() / n, -x.im() / n};
}

std::string to_string(const Gaussian& x) {
    if (x.is_real()) return x.re().get_str();
    std::string im;
    Rational a = abs(x.im());
    im = (a == 1) ? "i" : a.get_str() + "*i";
    if (sgn(x.re()) == 0) return (sgn(x.im()) < 0 ? "-" : "") + im;
    return x.re().get_str() + (sgn(x.im()) < 0 ? " - " : " + ") + im;
}

std::ostream& operator<<(std::ostream& os, const Gaussian& x) { return os << to_string(x); }

}  // namespace spencer
