#include "doctest.h"

#include "motbiv/errors.hpp"
#include "motbiv/graded.hpp"
#include "motbiv/variety.hpp"

using namespace motbiv;

namespace {

// Deterministic local generator for property sampling.
struct Rng {
    uint64_t s;
    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) { return lo + static_cast<int>(next() % (hi - lo + 1)); }
};

GradedClass random_class(const VarietyPtr& x, Rng& rng) {
    GradedClass c(x);
    for (int d = 0; d <= x->dim(); ++d) {
        for (int i = 0; i < x->rank(d); ++i) {
            std::vector<Rational> coeffs;
            int ydeg = rng.range(0, 2);
            for (int k = 0; k <= ydeg; ++k)
                coeffs.push_back(Rational(rng.range(-3, 3), 1 + rng.range(0, 2)));
            c.add_coeff(d, i, YPolynomial(std::move(coeffs)));
        }
    }
    return c;
}

} // namespace

TEST_CASE("rational reduction and arithmetic") {
    Rational r(6, 4);
    CHECK(r.numerator() == 3);
    CHECK(r.denominator() == 2);
    CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
    CHECK((Rational(-2, 4)).str() == "-1/2");
    CHECK(Rational(0).str() == "0");
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(2, -4).denominator() == 2);
    CHECK(Rational::binomial(4, 2) == Rational(6));
    CHECK(Rational::factorial(5) == Rational(120));
    CHECK_THROWS_AS(Rational(1, 0), InvalidParameters);
}

TEST_CASE("y-polynomial arithmetic and the degree sentinel") {
    YPolynomial zero;
    CHECK(zero.degree() == YPolynomial::kZeroDegree);
    CHECK(zero.is_zero());

    YPolynomial p(std::vector<Rational>{1, -1, 1}); // 1 - y + y^2
    CHECK(p.degree() == 2);
    CHECK(p.str() == "1 - y + y^2");
    CHECK((p - p).degree() == YPolynomial::kZeroDegree);

    YPolynomial q = YPolynomial(1) + YPolynomial::y(); // 1 + y
    CHECK((q * (YPolynomial(1) - YPolynomial::y())).str() == "1 - y^2");
    CHECK(q.evaluate(Rational(-1)) == Rational(0));
    CHECK(p.evaluate(Rational(2)) == Rational(3));

    // trailing zeros trimmed on construction
    YPolynomial t(std::vector<Rational>{2, 0, 0});
    CHECK(t.degree() == 0);
}

TEST_CASE("synthetic division by (1+y) is exact or rejected") {
    YPolynomial one_minus_y2 = YPolynomial(1) - YPolynomial::y() * YPolynomial::y();
    CHECK(one_minus_y2.divide_by_one_plus_y() == YPolynomial(1) - YPolynomial::y());
    CHECK(YPolynomial::one_plus_y_pow(3).divide_by_one_plus_y_pow(3) == YPolynomial(1));
    CHECK_THROWS_AS(YPolynomial(1).divide_by_one_plus_y(), NotDivisible);
}

TEST_CASE("ring_add on the catalogue examples") {
    auto p2 = make_proj(2);
    GradedClass x(p2);
    x.set_coeff(1, 0, YPolynomial(3));

    CHECK(ring_add(GradedClass(p2), x) == x); // 0 + x = x

    GradedClass a = GradedClass::unit(p2) + x;                 // 1 + 3h
    GradedClass b = generator_class(p2, 0).scaled(YPolynomial(2)); // 2h
    GradedClass s = ring_add(a, b);
    CHECK(s.coeff(0, 0) == YPolynomial(1));
    CHECK(s.coeff(1, 0) == YPolynomial(5));

    CHECK((a + (-a)).is_zero());

    auto p1 = make_proj(1);
    CHECK_THROWS_AS(ring_add(a, GradedClass::unit(p1)), AmbientMismatch);
}

TEST_CASE("ring_mul truncates at the ambient dimension") {
    auto p1 = make_proj(1);
    GradedClass oph = GradedClass::unit(p1) + generator_class(p1, 0);
    GradedClass sq = ring_mul(oph, oph); // (1+h)^2 = 1 + 2h, h^2 = 0
    CHECK(sq.coeff(0, 0) == YPolynomial(1));
    CHECK(sq.coeff(1, 0) == YPolynomial(2));
    CHECK(sq.component(1).size() == 1);

    auto p2 = make_proj(2);
    GradedClass h = generator_class(p2, 0);
    GradedClass x = GradedClass::unit(p2) + h.scaled(YPolynomial(7));
    CHECK(ring_mul(GradedClass::unit(p2), x) == x);
    CHECK(ring_mul(h, h) == monomial_class(p2, 2, 0, YPolynomial(1)));
}

TEST_CASE("divide_exact per-degree scaling") {
    auto p2 = make_proj(2);
    YPolynomial one_plus_y = YPolynomial::one_plus_y_pow(1);

    GradedClass c(p2);
    c.set_coeff(1, 0, one_plus_y);
    GradedClass d = divide_exact(c, 1, ScaleDirection::Divide);
    CHECK(d.coeff(1, 0) == YPolynomial(1));

    GradedClass c2(p2);
    c2.set_coeff(1, 0, YPolynomial(1) - YPolynomial::y() * YPolynomial::y());
    CHECK(divide_exact(c2, 1, ScaleDirection::Divide).coeff(1, 0) ==
          YPolynomial(1) - YPolynomial::y());

    GradedClass c3(p2);
    c3.set_coeff(1, 0, YPolynomial(1));
    CHECK_THROWS_AS(divide_exact(c3, 1, ScaleDirection::Divide), NotDivisible);
}

TEST_CASE("ring axioms hold on sampled triples") {
    Rng rng{42};
    std::vector<VarietyPtr> spaces = {make_proj(2), make_product(make_proj(1), make_proj(1)),
                                      make_blowup_linear(2, 0)};
    for (const auto& x : spaces) {
        for (int trial = 0; trial < 12; ++trial) {
            GradedClass a = random_class(x, rng);
            GradedClass b = random_class(x, rng);
            GradedClass c = random_class(x, rng);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(GradedClass::unit(x) * a == a);
        }
    }
}

TEST_CASE("divide_exact round-trips with its inverse multiplication") {
    Rng rng{7};
    auto x = make_blowup_linear(3, 1);
    for (int trial = 0; trial < 10; ++trial) {
        GradedClass a = random_class(x, rng);
        GradedClass up = divide_exact(a, 2, ScaleDirection::Multiply);
        CHECK(divide_exact(up, 2, ScaleDirection::Divide) == a);
    }
}

TEST_CASE("rendering is stable and sorted by degree then basis index") {
    auto p2 = make_proj(2);
    GradedClass c = GradedClass::unit(p2);
    c.set_coeff(1, 0, YPolynomial(3));
    c.set_coeff(2, 0, YPolynomial(3));
    CHECK(c.str() == "1 + 3*h + 3*h^2");

    auto p1 = make_proj(1);
    GradedClass d = GradedClass::unit(p1);
    d.set_coeff(1, 0, YPolynomial(1) - YPolynomial::y());
    CHECK(d.str() == "1 + (1 - y)*h");

    GradedClass e(p1);
    e.set_coeff(1, 0, YPolynomial(-1));
    CHECK(e.str() == "-h");
    CHECK(GradedClass(p1).str() == "0");
}
