#include "motbiv/graded.hpp"

#include "motbiv/errors.hpp"
#include "motbiv/variety.hpp"

namespace motbiv {

GradedClass GradedClass::unit(VarietyPtr ambient) {
    GradedClass c(std::move(ambient));
    c.set_coeff(0, 0, YPolynomial(1));
    return c;
}

YPolynomial GradedClass::coeff(int degree, int index) const {
    auto it = comps_.find(degree);
    if (it == comps_.end()) return YPolynomial();
    if (index < 0 || index >= static_cast<int>(it->second.size())) return YPolynomial();
    return it->second[index];
}

void GradedClass::set_coeff(int degree, int index, const YPolynomial& v) {
    if (!ambient_) throw InvalidParameters("graded class without ambient");
    if (degree < 0 || degree > ambient_->dim()) return; // truncated
    auto& vec = comps_[degree];
    vec.resize(ambient_->rank(degree));
    if (index < 0 || index >= static_cast<int>(vec.size()))
        throw InvalidParameters("basis index out of range");
    vec[index] = v;
    prune();
}

void GradedClass::add_coeff(int degree, int index, const YPolynomial& v) {
    if (!ambient_) throw InvalidParameters("graded class without ambient");
    if (degree < 0 || degree > ambient_->dim()) return;
    if (v.is_zero()) return;
    auto& vec = comps_[degree];
    vec.resize(ambient_->rank(degree));
    if (index < 0 || index >= static_cast<int>(vec.size()))
        throw InvalidParameters("basis index out of range");
    vec[index] += v;
    prune();
}

std::vector<YPolynomial> GradedClass::component(int degree) const {
    auto it = comps_.find(degree);
    if (it != comps_.end()) return it->second;
    return std::vector<YPolynomial>(ambient_ ? ambient_->rank(degree) : 0);
}

GradedClass GradedClass::operator-() const {
    GradedClass r(ambient_);
    for (const auto& [d, vec] : comps_) {
        auto& rv = r.comps_[d];
        rv.resize(vec.size());
        for (size_t i = 0; i < vec.size(); ++i) rv[i] = -vec[i];
    }
    return r;
}

void GradedClass::check_same_ambient(const GradedClass& o) const {
    if (!ambient_ || !o.ambient_ || !(*ambient_ == *o.ambient_))
        throw AmbientMismatch((ambient_ ? ambient_->key() : "<none>") + " vs " +
                              (o.ambient_ ? o.ambient_->key() : "<none>"));
}

GradedClass& GradedClass::operator+=(const GradedClass& o) {
    check_same_ambient(o);
    for (const auto& [d, vec] : o.comps_) {
        auto& mine = comps_[d];
        mine.resize(ambient_->rank(d));
        for (size_t i = 0; i < vec.size(); ++i) mine[i] += vec[i];
    }
    prune();
    return *this;
}

GradedClass& GradedClass::operator-=(const GradedClass& o) {
    check_same_ambient(o);
    for (const auto& [d, vec] : o.comps_) {
        auto& mine = comps_[d];
        mine.resize(ambient_->rank(d));
        for (size_t i = 0; i < vec.size(); ++i) mine[i] -= vec[i];
    }
    prune();
    return *this;
}

GradedClass operator*(const GradedClass& a, const GradedClass& b) {
    a.check_same_ambient(b);
    const auto& x = *a.ambient_;
    GradedClass r(a.ambient_);
    for (const auto& [d1, v1] : a.comps_) {
        for (const auto& [d2, v2] : b.comps_) {
            if (d1 + d2 > x.dim()) continue;
            for (size_t i = 0; i < v1.size(); ++i) {
                if (v1[i].is_zero()) continue;
                for (size_t j = 0; j < v2.size(); ++j) {
                    if (v2[j].is_zero()) continue;
                    YPolynomial c = v1[i] * v2[j];
                    for (const auto& [k, rat] : x.basis_product(d1, static_cast<int>(i),
                                                                d2, static_cast<int>(j)))
                        r.add_coeff(d1 + d2, k, c.scaled(rat));
                }
            }
        }
    }
    return r;
}

GradedClass GradedClass::scaled(const YPolynomial& s) const {
    GradedClass r(ambient_);
    if (s.is_zero()) return r;
    for (const auto& [d, vec] : comps_) {
        auto& rv = r.comps_[d];
        rv.resize(vec.size());
        for (size_t i = 0; i < vec.size(); ++i) rv[i] = vec[i] * s;
    }
    r.prune();
    return r;
}

GradedClass GradedClass::homogeneous_part(int degree) const {
    GradedClass r(ambient_);
    auto it = comps_.find(degree);
    if (it != comps_.end()) r.comps_[degree] = it->second;
    return r;
}

GradedClass GradedClass::evaluated_at(const Rational& y) const {
    GradedClass r(ambient_);
    for (const auto& [d, vec] : comps_) {
        auto& rv = r.comps_[d];
        rv.resize(vec.size());
        for (size_t i = 0; i < vec.size(); ++i) rv[i] = YPolynomial(vec[i].evaluate(y));
    }
    r.prune();
    return r;
}

bool GradedClass::is_y_free() const {
    for (const auto& [d, vec] : comps_)
        for (const auto& c : vec)
            if (c.degree() > 0) return false;
    return true;
}

bool operator==(const GradedClass& a, const GradedClass& b) {
    if (!a.ambient_ || !b.ambient_) return a.is_zero() && b.is_zero();
    if (!(*a.ambient_ == *b.ambient_)) return false;
    return a.comps_ == b.comps_;
}

void GradedClass::prune() {
    for (auto it = comps_.begin(); it != comps_.end();) {
        bool all_zero = true;
        for (const auto& c : it->second)
            if (!c.is_zero()) { all_zero = false; break; }
        it = all_zero ? comps_.erase(it) : std::next(it);
    }
}

std::string GradedClass::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [d, vec] : comps_) {
        for (size_t i = 0; i < vec.size(); ++i) {
            const YPolynomial& c = vec[i];
            if (c.is_zero()) continue;
            const std::string& mono = ambient_->monomial_name(d, static_cast<int>(i));
            std::string piece;
            if (c.is_simple_term()) {
                std::string cs = c.str();
                bool neg = !cs.empty() && cs[0] == '-';
                if (neg) cs = cs.substr(1);
                if (mono == "1") {
                    piece = cs;
                } else if (cs == "1") {
                    piece = mono;
                } else {
                    piece = cs + "*" + mono;
                }
                out += first ? (neg ? "-" + piece : piece)
                             : (neg ? " - " + piece : " + " + piece);
            } else {
                piece = "(" + c.str() + ")";
                if (mono != "1") piece += "*" + mono;
                out += first ? piece : " + " + piece;
            }
            first = false;
        }
    }
    return out;
}

GradedClass ring_add(const GradedClass& a, const GradedClass& b) { return a + b; }
GradedClass ring_mul(const GradedClass& a, const GradedClass& b) { return a * b; }

GradedClass divide_exact(const GradedClass& p, unsigned d, ScaleDirection direction) {
    GradedClass r(p.ambient());
    for (const auto& [deg, vec] : p.components()) {
        unsigned power = static_cast<unsigned>(deg) * d;
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i].is_zero()) continue;
            YPolynomial v = (direction == ScaleDirection::Multiply)
                                ? vec[i] * YPolynomial::one_plus_y_pow(power)
                                : vec[i].divide_by_one_plus_y_pow(power);
            r.add_coeff(deg, static_cast<int>(i), v);
        }
    }
    return r;
}

GradedClass scale_one_plus_y(const GradedClass& p, int k) {
    if (k == 0) return p;
    GradedClass r(p.ambient());
    for (const auto& [deg, vec] : p.components()) {
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i].is_zero()) continue;
            YPolynomial v = (k > 0)
                                ? vec[i] * YPolynomial::one_plus_y_pow(static_cast<unsigned>(k))
                                : vec[i].divide_by_one_plus_y_pow(static_cast<unsigned>(-k));
            r.add_coeff(deg, static_cast<int>(i), v);
        }
    }
    return r;
}

} // namespace motbiv
