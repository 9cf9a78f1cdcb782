#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motbiv/variety.hpp"

namespace motbiv {

class MorphismModel;
using MorphPtr = std::shared_ptr<const MorphismModel>;

enum class MorKind {
    Identity,
    ToPoint,
    ProductProjection,
    BundleProjection,
    LinearEmbedding,
    ZeroSection,
    ExceptionalInclusion,
    BlowDown,
    CenterEmbedding,       // alias of LinearEmbedding in scenario input
    StrictTransform,       // P^k into a blow-up, image disjoint from the center
    ProductMap,
    BundleBaseChange,
    Composite,
};

// One component of a product map: a morphism between groups of factor slots.
// Empty src_slots means a point source (a constant slice component).
struct PmComponent {
    std::vector<int> src_slots;
    std::vector<int> dst_slots;
    MorphPtr m;
};

// A structural morphism of the constructive class. All morphisms here are
// proper (every model is complete); smoothness is per-kind, and the relative
// tangent bundle is present exactly for smooth morphisms. Pullback is the
// contravariant ring map, pushforward the proper pushforward; both are exact
// linear data derived from the structural kind.
class MorphismModel {
public:
    MorKind kind() const { return kind_; }
    const VarietyPtr& source() const { return source_; }
    const VarietyPtr& target() const { return target_; }
    bool is_proper() const { return true; }
    bool is_smooth() const { return smooth_; }
    const std::optional<BundleClass>& relative_tangent_opt() const { return rel_tangent_; }
    const std::string& descriptor() const { return descriptor_; }
    int relative_dim() const { return source_->dim() - target_->dim(); }

    GradedClass pullback(const GradedClass& on_target) const;
    GradedClass pushforward(const GradedClass& on_source) const;

    const std::vector<int>& keep_slots() const { return keep_slots_; }
    const std::vector<PmComponent>& pm_components() const { return pm_; }
    const std::vector<MorphPtr>& components() const { return comps_; }
    const MorphPtr& inner() const { return inner_; }
    const std::shared_ptr<const BundleClass>& bundle() const { return bundle_; }
    int emb_k() const { return k_; }
    int emb_n() const { return n_; }
    int bl_n() const { return n_; }
    int bl_m() const { return m_; }

    friend bool operator==(const MorphismModel& a, const MorphismModel& b) {
        return a.descriptor_ == b.descriptor_;
    }

private:
    friend class MorphismFactory;
    friend MorphPtr identity(const VarietyPtr&);
    friend MorphPtr to_point(const VarietyPtr&);
    friend MorphPtr product_projection(const VarietyPtr&, std::vector<int>);
    friend MorphPtr bundle_projection(const BundleClass&);
    friend MorphPtr linear_embedding(int, int);
    friend MorphPtr zero_section(const BundleClass&);
    friend MorphPtr exceptional_inclusion(int, int);
    friend MorphPtr blow_down(int, int);
    friend MorphPtr strict_transform_embedding(int, int, int);
    friend MorphPtr product_map(const VarietyPtr&, const VarietyPtr&, std::vector<PmComponent>);
    friend MorphPtr bundle_base_change(const BundleClass&, const MorphPtr&);
    friend MorphPtr compose(const MorphPtr&, const MorphPtr&);
    MorphismModel() = default;

    GradedClass monomial_pullback(int degree, int index) const;
    GradedClass monomial_pushforward(int degree, int index) const;

    MorKind kind_ = MorKind::Identity;
    VarietyPtr source_, target_;
    bool smooth_ = false;
    std::optional<BundleClass> rel_tangent_;
    std::string descriptor_;

    std::vector<int> keep_slots_;                  // ProductProjection
    std::vector<PmComponent> pm_;                  // ProductMap
    std::vector<MorphPtr> comps_;                  // Composite, application order
    MorphPtr inner_;                               // BundleBaseChange: map of bases
    std::shared_ptr<const BundleClass> bundle_;    // bundle-flavored kinds
    GradedClass section_class_;                    // ZeroSection pushforward factor
    int n_ = 0, m_ = 0, k_ = 0;                    // embedding / blow-up parameters
};

MorphPtr identity(const VarietyPtr& x);
MorphPtr to_point(const VarietyPtr& x);
// Projection of a product onto the subproduct of the kept slots.
MorphPtr product_projection(const VarietyPtr& product, std::vector<int> keep);
MorphPtr bundle_projection(const BundleClass& e);
MorphPtr linear_embedding(int k, int n);
MorphPtr center_embedding(int n, int m); // the center P^m of a blow-up of P^n
MorphPtr zero_section(const BundleClass& e);
MorphPtr exceptional_inclusion(int n, int m);
MorphPtr blow_down(int n, int m);
MorphPtr strict_transform_embedding(int k, int n, int m);
MorphPtr product_map(const VarietyPtr& src, const VarietyPtr& dst,
                     std::vector<PmComponent> comps);
// Product of morphisms, sources and targets combined as (sorted) products.
MorphPtr cross(const std::vector<MorphPtr>& ms);
MorphPtr bundle_base_change(const BundleClass& e, const MorphPtr& g);
MorphPtr compose(const MorphPtr& after, const MorphPtr& before);

// Spec operation names.
GradedClass pullback_class(const MorphPtr& m, const GradedClass& c);
GradedClass pushforward_class(const MorphPtr& m, const GradedClass& c);
BundleClass relative_tangent(const MorphPtr& m); // throws NotSmooth
BundleClass pullback_bundle(const MorphPtr& m, const BundleClass& e);

// The exceptional divisor E(n,m) = P(N) for N the normal bundle of P^m in P^n.
VarietyPtr exceptional_variety(int n, int m);
BundleClass normal_bundle_of_center(int n, int m);

} // namespace motbiv
