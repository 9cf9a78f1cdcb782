#include "motbiv/ypoly.hpp"

#include <algorithm>

namespace motbiv {

YPolynomial YPolynomial::one_plus_y_pow(unsigned k) {
    std::vector<Rational> c(k + 1);
    for (unsigned i = 0; i <= k; ++i) c[i] = Rational::binomial(k, i);
    return YPolynomial(std::move(c));
}

YPolynomial YPolynomial::operator-() const {
    std::vector<Rational> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
    return YPolynomial(std::move(c));
}

YPolynomial& YPolynomial::operator+=(const YPolynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

YPolynomial& YPolynomial::operator-=(const YPolynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

YPolynomial operator*(const YPolynomial& a, const YPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return YPolynomial();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return YPolynomial(std::move(c));
}

YPolynomial YPolynomial::scaled(const Rational& s) const {
    if (s.is_zero()) return YPolynomial();
    std::vector<Rational> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * s;
    return YPolynomial(std::move(c));
}

YPolynomial YPolynomial::pow(unsigned e) const {
    YPolynomial r(1);
    for (unsigned i = 0; i < e; ++i) r *= *this;
    return r;
}

Rational YPolynomial::evaluate(const Rational& y) const {
    Rational r(0);
    for (size_t i = c_.size(); i-- > 0;) r = r * y + c_[i];
    return r;
}

YPolynomial YPolynomial::divide_by_one_plus_y() const {
    if (is_zero()) return YPolynomial();
    // p(y) = (1+y) q(y) + rem, rem = p(-1).
    std::vector<Rational> q(c_.size() - 1);
    Rational carry(0); // running coefficient of the quotient, highest first
    for (size_t i = c_.size(); i-- > 1;) {
        carry = c_[i] - carry;
        q[i - 1] = carry;
    }
    Rational rem = c_[0] - carry;
    if (!rem.is_zero())
        throw NotDivisible("remainder " + rem.str() + " dividing " + str() + " by (1+y)");
    return YPolynomial(std::move(q));
}

YPolynomial YPolynomial::divide_by_one_plus_y_pow(unsigned k) const {
    YPolynomial r = *this;
    for (unsigned i = 0; i < k; ++i) r = r.divide_by_one_plus_y();
    return r;
}

bool YPolynomial::is_simple_term() const {
    size_t nonzero = 0;
    for (const auto& c : c_)
        if (!c.is_zero()) ++nonzero;
    return nonzero <= 1;
}

std::string YPolynomial::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        Rational c = c_[k];
        std::string sign;
        if (first) {
            sign = c.is_negative() ? "-" : "";
        } else {
            sign = c.is_negative() ? " - " : " + ";
        }
        if (c.is_negative()) c = -c;
        std::string mag;
        if (k == 0) {
            mag = c.str();
        } else {
            std::string ypart = (k == 1) ? "y" : "y^" + std::to_string(k);
            mag = (c == Rational(1)) ? ypart : c.str() + "*" + ypart;
        }
        out += sign + mag;
        first = false;
    }
    return out;
}

} // namespace motbiv
