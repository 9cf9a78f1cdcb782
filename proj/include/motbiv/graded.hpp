#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "motbiv/ypoly.hpp"

namespace motbiv {

class VarietyModel;
using VarietyPtr = std::shared_ptr<const VarietyModel>;

// Element of the truncated graded intersection ring of a VarietyModel with
// coefficients in Q[y]. Components are stored sparsely per codimension degree;
// a stored component is a dense coordinate vector in the degree's monomial
// basis. Zero components are absent.
class GradedClass {
public:
    GradedClass() = default;
    explicit GradedClass(VarietyPtr ambient) : ambient_(std::move(ambient)) {}
    static GradedClass unit(VarietyPtr ambient);

    const VarietyPtr& ambient() const { return ambient_; }
    bool has_ambient() const { return ambient_ != nullptr; }

    bool is_zero() const { return comps_.empty(); }
    YPolynomial coeff(int degree, int index) const;
    void set_coeff(int degree, int index, const YPolynomial& v);
    void add_coeff(int degree, int index, const YPolynomial& v);
    std::vector<YPolynomial> component(int degree) const;
    bool has_component(int degree) const { return comps_.count(degree) != 0; }
    const std::map<int, std::vector<YPolynomial>>& components() const { return comps_; }

    GradedClass operator-() const;
    GradedClass& operator+=(const GradedClass& o);
    GradedClass& operator-=(const GradedClass& o);
    friend GradedClass operator+(GradedClass a, const GradedClass& b) { return a += b; }
    friend GradedClass operator-(GradedClass a, const GradedClass& b) { return a -= b; }
    friend GradedClass operator*(const GradedClass& a, const GradedClass& b);

    GradedClass scaled(const YPolynomial& s) const;
    GradedClass homogeneous_part(int degree) const;

    // Substitute a rational value for y in every coordinate.
    GradedClass evaluated_at(const Rational& y) const;
    bool is_y_free() const;

    friend bool operator==(const GradedClass& a, const GradedClass& b);
    friend bool operator!=(const GradedClass& a, const GradedClass& b) { return !(a == b); }

    std::string str() const;

private:
    void prune();
    void check_same_ambient(const GradedClass& o) const;

    VarietyPtr ambient_;
    std::map<int, std::vector<YPolynomial>> comps_;
};

GradedClass ring_add(const GradedClass& a, const GradedClass& b);
GradedClass ring_mul(const GradedClass& a, const GradedClass& b);

enum class ScaleDirection { Divide = -1, Multiply = +1 };

// Scales the codimension-c component by (1+y)^(c*d), dividing when direction
// is Divide. Division is synthetic with a remainder check; a nonzero remainder
// raises NotDivisible.
GradedClass divide_exact(const GradedClass& p, unsigned d, ScaleDirection direction);

// Uniform scaling of every component by (1+y)^k (k may be negative: divide).
GradedClass scale_one_plus_y(const GradedClass& p, int k);

} // namespace motbiv
