#pragma once

#include <string>
#include <vector>

#include "motbiv/rational.hpp"

namespace motbiv {

// Polynomial in the parameter y with exact rational coefficients.
// Coefficients are stored low degree first with no trailing zeros; the zero
// polynomial has an empty coefficient vector and degree kZeroDegree.
class YPolynomial {
public:
    static constexpr int kZeroDegree = -1;

    YPolynomial() = default;
    YPolynomial(const Rational& c) { if (!c.is_zero()) c_.push_back(c); } // NOLINT
    YPolynomial(long c) : YPolynomial(Rational(c)) {}                     // NOLINT
    explicit YPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static YPolynomial y() { return YPolynomial(std::vector<Rational>{Rational(0), Rational(1)}); }
    static YPolynomial one_plus_y_pow(unsigned k);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
    Rational coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Rational(0);
    }

    YPolynomial operator-() const;
    YPolynomial& operator+=(const YPolynomial& o);
    YPolynomial& operator-=(const YPolynomial& o);
    friend YPolynomial operator+(YPolynomial a, const YPolynomial& b) { return a += b; }
    friend YPolynomial operator-(YPolynomial a, const YPolynomial& b) { return a -= b; }
    friend YPolynomial operator*(const YPolynomial& a, const YPolynomial& b);
    YPolynomial& operator*=(const YPolynomial& o) { return *this = *this * o; }

    YPolynomial scaled(const Rational& s) const;
    YPolynomial pow(unsigned e) const;

    Rational evaluate(const Rational& y) const;

    // Synthetic division by (1+y); throws NotDivisible on nonzero remainder.
    YPolynomial divide_by_one_plus_y() const;
    YPolynomial divide_by_one_plus_y_pow(unsigned k) const;

    friend bool operator==(const YPolynomial& a, const YPolynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const YPolynomial& a, const YPolynomial& b) { return !(a == b); }

    // "0", "1 - y + y^2", "3/2*y", "-y^3"
    std::string str() const;
    // A single monomial c*y^k with c > 0 counts as simple; used by renderers
    // to decide whether a coefficient needs parentheses.
    bool is_simple_term() const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

} // namespace motbiv
