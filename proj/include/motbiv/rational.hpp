#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "motbiv/errors.hpp"

namespace motbiv {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Always reduced, denominator > 0, zero is 0/1.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}                      // NOLINT: implicit by design
    Rational(const BigInt& n) : v_(n) {}             // NOLINT
    Rational(const BigInt& num, const BigInt& den) : v_(num) {
        if (den == 0) throw InvalidParameters("rational with zero denominator");
        v_ /= boost::multiprecision::cpp_rational(den);
    }
    Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return denominator() == 1; }

    Rational operator-() const { return Rational(-v_); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw InvalidParameters("division by zero rational");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    bool is_negative() const { return v_ < 0; }

    // "3", "-3", "1/2", "-5/7"
    std::string str() const;

    static Rational factorial(unsigned n);
    static Rational binomial(unsigned n, unsigned k);
    Rational pow(unsigned e) const;

private:
    explicit Rational(const boost::multiprecision::cpp_rational& v) : v_(v) {}
    boost::multiprecision::cpp_rational v_;
};

} // namespace motbiv
