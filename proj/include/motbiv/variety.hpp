#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motbiv/graded.hpp"

namespace motbiv {

enum class VarietyKind { Point, Proj, Product, ProjBundle, BlowupLinear };

// Exponent vector over a model's degree-one generators.
using ExpVec = std::vector<int>;
// Sparse combination over one degree's monomial basis.
using Combo = std::vector<std::pair<int, Rational>>;

struct BundleClass;

// A constructive smooth variety: canonical construction tree, explicit
// monomial basis per codimension degree with rewrite rules into it, total
// tangent Chern class and integration. Instances are immutable after
// construction and deduplicated by canonical key, so pointer equality agrees
// with tree equality.
class VarietyModel : public std::enable_shared_from_this<VarietyModel> {
public:
    VarietyKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::string& key() const { return key_; }

    int rank(int degree) const {
        return (degree >= 0 && degree <= dim_) ? static_cast<int>(basis_[degree].size()) : 0;
    }
    const ExpVec& basis_exp(int degree, int index) const { return basis_[degree][index]; }
    const std::string& monomial_name(int degree, int index) const { return names_[degree][index]; }
    // (degree, index) of a monomial if it is a basis element, nullopt otherwise.
    std::optional<std::pair<int, int>> basis_lookup(const ExpVec& e) const;

    const std::vector<std::string>& gen_names() const { return gen_names_; }
    int gen_count() const { return static_cast<int>(gen_names_.size()); }

    // Rewrites an arbitrary monomial into the basis of its degree. Returns an
    // empty combo when the monomial reduces to zero (e.g. above the dimension).
    Combo reduce(const ExpVec& e) const;
    // Product of two basis monomials, reduced.
    Combo basis_product(int d1, int i1, int d2, int j2) const;

    const GradedClass& tangent_chern() const { return tangent_chern_; }

    // Combinatorial Euler characteristic from the construction tree; serves
    // as an independent oracle for the integral of the top Chern class.
    long euler_characteristic() const;

    // Tree data per kind.
    int proj_n() const { return proj_n_; }
    const std::vector<VarietyPtr>& factors() const { return factors_; }
    // Offset of a product factor's generators inside this model's gen list.
    int factor_gen_offset(int slot) const;
    VarietyPtr bundle_base() const { return base_; }
    const std::shared_ptr<const BundleClass>& bundle() const { return bundle_; }
    int bl_n() const { return bl_n_; }
    int bl_m() const { return bl_m_; }

    friend bool operator==(const VarietyModel& a, const VarietyModel& b) { return a.key_ == b.key_; }

private:
    friend class VarietyBuilder;
    friend VarietyPtr make_point();
    friend VarietyPtr make_proj(int n);
    friend VarietyPtr make_product_tracked(const std::vector<VarietyPtr>& inputs,
                                           std::vector<std::vector<int>>* slots_of);
    friend VarietyPtr make_proj_bundle(const BundleClass& e);
    friend VarietyPtr make_blowup_linear(int n, int m);
    VarietyModel() = default;

    VarietyKind kind_ = VarietyKind::Point;
    int dim_ = 0;
    std::string key_;
    std::vector<std::string> gen_names_;
    std::vector<std::vector<ExpVec>> basis_;          // per degree
    std::vector<std::vector<std::string>> names_;     // per degree
    std::map<ExpVec, std::pair<int, int>> index_;     // exp -> (degree, index)
    GradedClass tangent_chern_;

    int proj_n_ = 0;
    std::vector<VarietyPtr> factors_;
    VarietyPtr base_;
    std::shared_ptr<const BundleClass> bundle_;
    int bl_n_ = 0, bl_m_ = 0;

    mutable std::mutex memo_mutex_;
    mutable std::map<ExpVec, Combo> reduce_memo_;
    Combo reduce_uncached(const ExpVec& e) const;
};

// An algebraic vector bundle presented by its base, rank and total Chern
// class (y-free, degree-0 component equal to 1, components vanishing above
// min(rank, dim base)). Chern roots stay symbolic; only symmetric functions
// of them are ever materialized.
struct BundleClass {
    VarietyPtr base;
    int rank = 0;
    GradedClass total_chern;

    GradedClass chern(int i) const { return total_chern.homogeneous_part(i); }
    std::string chern_list_str() const; // "c1,c2,...,cr" in base generator names
};

BundleClass make_bundle(VarietyPtr base, int rank, const GradedClass& total_chern);
BundleClass trivial_bundle(VarietyPtr base, int rank);
BundleClass bundle_sum(const BundleClass& a, const BundleClass& b);
BundleClass tangent_bundle(const VarietyPtr& x);
bool bundle_equal(const BundleClass& a, const BundleClass& b);

VarietyPtr make_point();
VarietyPtr make_proj(int n);
VarietyPtr make_product(const VarietyPtr& a, const VarietyPtr& b);
// Flattened n-ary product; point factors are dropped and the rest sorted by
// canonical key. `slots_of`, when given, receives for each input index the
// result slots of that input's flattened factors, in the input's own factor
// order (empty list for point inputs).
VarietyPtr make_product_tracked(const std::vector<VarietyPtr>& inputs,
                                std::vector<std::vector<int>>* slots_of);
// P(E), fiberwise lines in E. Normalizations: rank 1 collapses to the base,
// a point base gives Proj(rank-1), a trivial Chern class gives
// base x P(rank-1).
VarietyPtr make_proj_bundle(const BundleClass& e);
VarietyPtr make_blowup_linear(int n, int m);

// Coefficient of the point class in the degree-dim component.
YPolynomial integrate(const VarietyPtr& x, const GradedClass& c);

// A single basis monomial as a class.
GradedClass monomial_class(const VarietyPtr& x, int degree, int index, const YPolynomial& coeff);
// Class with given exponent vector (reduced), e.g. generator powers.
GradedClass exp_class(const VarietyPtr& x, const ExpVec& e);
// Degree-one generator g_i as a class.
GradedClass generator_class(const VarietyPtr& x, int gen);

} // namespace motbiv
