#include "motbiv/rational.hpp"

namespace motbiv {

std::string Rational::str() const {
    std::string s = numerator().str();
    if (denominator() != 1) s += "/" + denominator().str();
    return s;
}

Rational Rational::factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

Rational Rational::binomial(unsigned n, unsigned k) {
    if (k > n) return Rational(0);
    BigInt num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) {
        num *= BigInt(n - i);
        den *= BigInt(i + 1);
    }
    return Rational(num, den);
}

Rational Rational::pow(unsigned e) const {
    Rational r(1);
    for (unsigned i = 0; i < e; ++i) r *= *this;
    return r;
}

} // namespace motbiv
