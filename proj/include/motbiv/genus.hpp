#pragma once

#include <string>
#include <vector>

#include "motbiv/variety.hpp"

namespace motbiv {

// A normalized power series Q(a) = 1 + q1 a + q2 a^2 + ... with Q[y]
// coefficients, stored to a requested order. Turning such a series into a
// multiplicative characteristic class is the job of multiplicative_class.
class GenusSeries {
public:
    GenusSeries() : c_{YPolynomial(1)} {}
    explicit GenusSeries(std::vector<YPolynomial> coeffs);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const YPolynomial& coeff(int k) const { return c_[k]; }

    friend bool operator==(const GenusSeries& a, const GenusSeries& b) { return a.c_ == b.c_; }

private:
    std::vector<YPolynomial> c_;
};

enum class SeriesName { Chern, Todd, LClass, Hirzebruch };

SeriesName series_name_from_string(const std::string& s); // throws ParseError

// Exact Taylor coefficients up to `order` of
//   chern:      1 + a
//   todd:       a / (1 - e^{-a})
//   lclass:     a / tanh a
//   hirzebruch: a(1+y)/(1 - e^{-a(1+y)}) - a y
GenusSeries series_named(SeriesName name, int order);

// prod_i Q(alpha_i) over the Chern roots of e, expressed in the Chern classes
// of e via Newton's identities, truncated at the base dimension.
GradedClass multiplicative_class(const GenusSeries& q, const BundleClass& e);

// ch(lambda_y(E^*)) = prod_j (1 + y e^{-alpha_j}).
GradedClass lambda_y_chern_character(const BundleClass& e);

// ch(lambda_y(E^*)) * td(E), the unnormalized Hirzebruch factor.
GradedClass unnormalized_ty_class(const BundleClass& e);

// chi_y(X) = integral of T*_y(TX).
YPolynomial chi_y(const VarietyPtr& x);

} // namespace motbiv
