#include "motbiv/genus.hpp"

#include "motbiv/errors.hpp"

namespace motbiv {

namespace {

using Series = std::vector<YPolynomial>; // index = power of alpha

Series series_mul(const Series& a, const Series& b, int order) {
    Series out(order + 1);
    for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

// 1 / a for a series with constant term 1.
Series series_reciprocal(const Series& a, int order) {
    Series out(order + 1);
    out[0] = YPolynomial(1);
    for (int k = 1; k <= order; ++k) {
        YPolynomial acc;
        for (int i = 1; i <= k && i < static_cast<int>(a.size()); ++i)
            acc += a[i] * out[k - i];
        out[k] = -acc;
    }
    return out;
}

} // namespace

GenusSeries::GenusSeries(std::vector<YPolynomial> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty() || !(c_[0] == YPolynomial(1)))
        throw InvalidParameters("genus series must be normalized");
}

SeriesName series_name_from_string(const std::string& s) {
    if (s == "chern") return SeriesName::Chern;
    if (s == "todd") return SeriesName::Todd;
    if (s == "lclass") return SeriesName::LClass;
    if (s == "hirzebruch") return SeriesName::Hirzebruch;
    throw ParseError("unknown series name: " + s);
}

GenusSeries series_named(SeriesName name, int order) {
    if (order < 0) throw InvalidParameters("series order must be >= 0");
    Series c(order + 1);
    c[0] = YPolynomial(1);
    switch (name) {
    case SeriesName::Chern:
        if (order >= 1) c[1] = YPolynomial(1);
        break;
    case SeriesName::Todd: {
        // (1 - e^{-a})/a = sum (-1)^k a^k/(k+1)!; Todd is its reciprocal.
        Series denom(order + 1);
        for (int k = 0; k <= order; ++k)
            denom[k] = YPolynomial(Rational((k % 2 == 0) ? 1 : -1) /
                                   Rational::factorial(static_cast<unsigned>(k + 1)));
        c = series_reciprocal(denom, order);
        break;
    }
    case SeriesName::LClass: {
        // a/tanh a = cosh(a) / (sinh(a)/a)
        Series cosh_s(order + 1), sinh_over(order + 1);
        for (int k = 0; k <= order; ++k) {
            if (k % 2 == 0) {
                cosh_s[k] = YPolynomial(Rational(1) / Rational::factorial(static_cast<unsigned>(k)));
                sinh_over[k] =
                    YPolynomial(Rational(1) / Rational::factorial(static_cast<unsigned>(k + 1)));
            }
        }
        c = series_mul(cosh_s, series_reciprocal(sinh_over, order), order);
        break;
    }
    case SeriesName::Hirzebruch: {
        // td_k (1+y)^k, with the linear term corrected by -y.
        GenusSeries td = series_named(SeriesName::Todd, order);
        for (int k = 0; k <= order; ++k)
            c[k] = td.coeff(k) * YPolynomial::one_plus_y_pow(static_cast<unsigned>(k));
        if (order >= 1) c[1] -= YPolynomial::y();
        break;
    }
    }
    return GenusSeries(std::move(c));
}

namespace {

// Power sums of the Chern roots in terms of the Chern classes.
std::vector<GradedClass> power_sums(const BundleClass& e) {
    int dim = e.base->dim();
    std::vector<GradedClass> p(dim + 1, GradedClass(e.base));
    for (int k = 1; k <= dim; ++k) {
        GradedClass acc = e.chern(k).scaled(YPolynomial(Rational((k % 2 == 0) ? -k : k)));
        for (int i = 1; i < k; ++i) {
            GradedClass term = e.chern(i) * p[k - i];
            acc += (i % 2 == 1) ? term : -term;
        }
        p[k] = acc;
    }
    return p;
}

GradedClass exp_positive(const GradedClass& s) {
    // s has no degree-0 part; exp truncates at the ambient dimension.
    const VarietyPtr& x = s.ambient();
    GradedClass out = GradedClass::unit(x);
    GradedClass pw = GradedClass::unit(x);
    for (int m = 1; m <= x->dim(); ++m) {
        pw = pw * s;
        if (pw.is_zero()) break;
        out += pw.scaled(YPolynomial(Rational(1) / Rational::factorial(static_cast<unsigned>(m))));
    }
    return out;
}

} // namespace

GradedClass multiplicative_class(const GenusSeries& q, const BundleClass& e) {
    int dim = e.base->dim();
    if (q.order() < dim)
        throw InsufficientOrder("series order " + std::to_string(q.order()) +
                                " below base dimension " + std::to_string(dim));
    if (dim == 0 || e.rank == 0) return GradedClass::unit(e.base);

    // log Q as a series in alpha
    Series u(dim + 1);
    for (int k = 1; k <= dim; ++k) u[k] = q.coeff(k);
    Series logq(dim + 1);
    Series upow{YPolynomial(1)};
    upow.resize(dim + 1);
    Series power = u;
    for (int m = 1; m <= dim; ++m) {
        Rational sign((m % 2 == 1) ? 1 : -1);
        for (int k = 0; k <= dim; ++k)
            logq[k] += power[k].scaled(sign / Rational(m));
        power = series_mul(power, u, dim);
    }

    std::vector<GradedClass> p = power_sums(e);
    GradedClass s(e.base);
    for (int k = 1; k <= dim; ++k)
        if (!logq[k].is_zero()) s += p[k].scaled(logq[k]);
    return exp_positive(s);
}

GradedClass lambda_y_chern_character(const BundleClass& e) {
    const VarietyPtr& x = e.base;
    int dim = x->dim();
    if (e.rank == 0) return GradedClass::unit(x);
    std::vector<GradedClass> p = power_sums(e);
    // s_k = sum_j e^{-k alpha_j} = rank + sum_m (-k)^m p_m / m!
    std::vector<GradedClass> s(e.rank + 1, GradedClass(x));
    for (int k = 1; k <= e.rank; ++k) {
        GradedClass acc = GradedClass::unit(x).scaled(YPolynomial(Rational(e.rank)));
        Rational km(1);
        for (int m = 1; m <= dim; ++m) {
            km *= Rational(-k);
            acc += p[m].scaled(YPolynomial(km / Rational::factorial(static_cast<unsigned>(m))));
        }
        s[k] = acc;
    }
    // elementary symmetric functions of the e^{-alpha_j} from their power sums
    std::vector<GradedClass> el(e.rank + 1, GradedClass(x));
    el[0] = GradedClass::unit(x);
    for (int pdeg = 1; pdeg <= e.rank; ++pdeg) {
        GradedClass acc(x);
        for (int i = 1; i <= pdeg; ++i) {
            GradedClass term = el[pdeg - i] * s[i];
            acc += (i % 2 == 1) ? term : -term;
        }
        el[pdeg] = acc.scaled(YPolynomial(Rational(1, pdeg)));
    }
    GradedClass out(x);
    YPolynomial ypow(1);
    for (int pdeg = 0; pdeg <= e.rank; ++pdeg) {
        out += el[pdeg].scaled(ypow);
        ypow *= YPolynomial::y();
    }
    return out;
}

GradedClass unnormalized_ty_class(const BundleClass& e) {
    GenusSeries td = series_named(SeriesName::Todd, e.base->dim());
    return lambda_y_chern_character(e) * multiplicative_class(td, e);
}

YPolynomial chi_y(const VarietyPtr& x) {
    GenusSeries q = series_named(SeriesName::Hirzebruch, x->dim());
    return integrate(x, multiplicative_class(q, tangent_bundle(x)));
}

} // namespace motbiv
