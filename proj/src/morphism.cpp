#include "motbiv/morphism.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

#include "motbiv/errors.hpp"

namespace motbiv {

namespace {

int slot_count(const VarietyPtr& v) {
    if (v->kind() == VarietyKind::Point) return 0;
    if (v->kind() == VarietyKind::Product) return static_cast<int>(v->factors().size());
    return 1;
}

VarietyPtr slot_model(const VarietyPtr& v, int s) {
    if (v->kind() == VarietyKind::Product) return v->factors()[s];
    return v;
}

int slot_gen_offset(const VarietyPtr& v, int s) {
    if (v->kind() == VarietyKind::Product) return v->factor_gen_offset(s);
    return 0;
}

VarietyPtr product_of_slots(const VarietyPtr& v, const std::vector<int>& slots) {
    std::vector<VarietyPtr> ms;
    for (int s : slots) ms.push_back(slot_model(v, s));
    return make_product_tracked(ms, nullptr);
}

// Sub-exponent of `exp` living on the listed slots, concatenated in order.
ExpVec extract_exp(const VarietyPtr& v, const ExpVec& exp, const std::vector<int>& slots) {
    ExpVec out;
    for (int s : slots) {
        int off = slot_gen_offset(v, s);
        int cnt = slot_model(v, s)->gen_count();
        out.insert(out.end(), exp.begin() + off, exp.begin() + off + cnt);
    }
    return out;
}

void place_exp(const VarietyPtr& v, const std::vector<int>& slots, const ExpVec& sub, ExpVec& into) {
    size_t pos = 0;
    for (int s : slots) {
        int off = slot_gen_offset(v, s);
        int cnt = slot_model(v, s)->gen_count();
        for (int g = 0; g < cnt; ++g) into[off + g] += sub[pos++];
    }
    assert(pos == sub.size());
}

// Class on the subproduct of `slots`, viewed inside v (degree 0 elsewhere).
GradedClass inject_class(const VarietyPtr& v, const std::vector<int>& slots, const GradedClass& c) {
    GradedClass out(v);
    const VarietyPtr& sub = c.ambient();
    for (const auto& [d, vec] : c.components()) {
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i].is_zero()) continue;
            ExpVec full(v->gen_count(), 0);
            place_exp(v, slots, sub->basis_exp(d, static_cast<int>(i)), full);
            auto slot = v->basis_lookup(full);
            assert(slot);
            out.add_coeff(slot->first, slot->second, vec[i]);
        }
    }
    return out;
}

// Presents a (possibly normalized) projective-bundle total space's basis as
// pairs (base monomial, fiber power).
struct BundleCoords {
    VarietyPtr total, base;
    int rank = 0;
    std::vector<int> wpos; // total-model gen position of each base gen
    int fpos = -1;         // gen position of the fiber class, -1 when collapsed

    static BundleCoords build(const BundleClass& e) {
        BundleCoords bc;
        bc.base = e.base;
        bc.rank = e.rank;
        if (e.rank == 1) {
            bc.total = e.base;
            for (int g = 0; g < e.base->gen_count(); ++g) bc.wpos.push_back(g);
            return bc;
        }
        if (e.base->kind() == VarietyKind::Point) {
            bc.total = make_proj(e.rank - 1);
            bc.fpos = 0;
            return bc;
        }
        if (e.total_chern == GradedClass::unit(e.base)) {
            std::vector<std::vector<int>> slots;
            bc.total = make_product_tracked({e.base, make_proj(e.rank - 1)}, &slots);
            for (int s : slots[0]) {
                int off = slot_gen_offset(bc.total, s);
                int cnt = slot_model(bc.total, s)->gen_count();
                for (int g = 0; g < cnt; ++g) bc.wpos.push_back(off + g);
            }
            bc.fpos = slot_gen_offset(bc.total, slots[1][0]);
            return bc;
        }
        bc.total = make_proj_bundle(e);
        for (int g = 0; g + 1 < bc.total->gen_count(); ++g) bc.wpos.push_back(g);
        bc.fpos = bc.total->gen_count() - 1;
        return bc;
    }

    // (base degree, base index, fiber power) of a total basis element.
    std::tuple<int, int, int> to_base(int d, int i) const {
        const ExpVec& exp = total->basis_exp(d, i);
        int k = fpos >= 0 ? exp[fpos] : 0;
        ExpVec bexp(wpos.size());
        for (size_t j = 0; j < wpos.size(); ++j) bexp[j] = exp[wpos[j]];
        auto slot = base->basis_lookup(bexp);
        assert(slot);
        return {slot->first, slot->second, k};
    }

    std::optional<std::pair<int, int>> from_base(int bd, int bi, int k) const {
        ExpVec exp(total->gen_count(), 0);
        const ExpVec& bexp = base->basis_exp(bd, bi);
        for (size_t j = 0; j < wpos.size(); ++j) exp[wpos[j]] = bexp[j];
        if (fpos >= 0) exp[fpos] = k;
        else if (k != 0) return std::nullopt;
        return total->basis_lookup(exp);
    }

    // base class placed at the given fiber power (0 <= k < rank).
    GradedClass lift(const GradedClass& c, int k) const {
        GradedClass out(total);
        for (const auto& [bd, vec] : c.components()) {
            for (size_t i = 0; i < vec.size(); ++i) {
                if (vec[i].is_zero()) continue;
                auto slot = from_base(bd, static_cast<int>(i), k);
                if (!slot) continue;
                out.add_coeff(slot->first, slot->second, vec[i]);
            }
        }
        return out;
    }

    GradedClass zeta_class() const {
        GradedClass out(total);
        if (fpos < 0) return out;
        ExpVec exp(total->gen_count(), 0);
        exp[fpos] = 1;
        auto slot = total->basis_lookup(exp);
        assert(slot);
        out.add_coeff(slot->first, slot->second, YPolynomial(1));
        return out;
    }
};

GradedClass bundle_relative_tangent_chern(const BundleClass& e, const BundleCoords& bc) {
    // Relative Euler sequence: c(T_q) = sum_i q*c_i(E) (1+zeta)^(rank-i).
    GradedClass one_plus_zeta = GradedClass::unit(bc.total) + bc.zeta_class();
    GradedClass rel(bc.total);
    for (int i = 0; i <= e.rank; ++i) {
        GradedClass ci = e.chern(i);
        if (ci.is_zero()) continue;
        GradedClass p = GradedClass::unit(bc.total);
        for (int j = 0; j < e.rank - i; ++j) p = p * one_plus_zeta;
        rel += bc.lift(ci, 0) * p;
    }
    return rel;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

class MorphismFactory {
public:
    static std::shared_ptr<MorphismModel> fresh(MorKind kind, VarietyPtr src, VarietyPtr tgt) {
        auto m = std::shared_ptr<MorphismModel>(new MorphismModel());
        m->kind_ = kind;
        m->source_ = std::move(src);
        m->target_ = std::move(tgt);
        return m;
    }
};

namespace {

std::shared_ptr<MorphismModel> fresh_morphism(MorKind kind, VarietyPtr src, VarietyPtr tgt) {
    return MorphismFactory::fresh(kind, std::move(src), std::move(tgt));
}

} // namespace

// ---------------------------------------------------------------------------
// Constructors

MorphPtr identity(const VarietyPtr& x) {
    auto m = fresh_morphism(MorKind::Identity, x, x);
    auto& mm = *m;
    mm.smooth_ = true;
    mm.rel_tangent_ = trivial_bundle(x, 0);
    mm.descriptor_ = "id[" + x->key() + "]";
    return m;
}

MorphPtr to_point(const VarietyPtr& x) {
    if (x->kind() == VarietyKind::Point) return identity(x);
    auto m = fresh_morphism(MorKind::ToPoint, x, make_point());
    auto& mm = *m;
    mm.smooth_ = true;
    mm.rel_tangent_ = tangent_bundle(x);
    mm.descriptor_ = "pt![" + x->key() + "]";
    return m;
}

MorphPtr product_projection(const VarietyPtr& product, std::vector<int> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    int n = slot_count(product);
    for (int s : keep)
        if (s < 0 || s >= n) throw InvalidParameters("projection slot out of range");
    if (static_cast<int>(keep.size()) == n) return identity(product);
    if (keep.empty()) return to_point(product);

    auto m = fresh_morphism(MorKind::ProductProjection, product, product_of_slots(product, keep));
    auto& mm = *m;
    mm.keep_slots_ = keep;
    mm.smooth_ = true;
    GradedClass chern = GradedClass::unit(product);
    int rank = 0;
    for (int s = 0; s < n; ++s) {
        if (std::binary_search(keep.begin(), keep.end(), s)) continue;
        VarietyPtr f = slot_model(product, s);
        chern = chern * inject_class(product, {s}, f->tangent_chern());
        rank += f->dim();
    }
    mm.rel_tangent_ = make_bundle(product, rank, chern);
    mm.descriptor_ = "prj[" + product->key() + "|" + join_ints(keep) + "]";
    return m;
}

MorphPtr linear_embedding(int k, int n) {
    if (k < 0 || k > n) throw InvalidParameters("linear embedding needs 0 <= k <= n");
    if (k == n) return identity(make_proj(n));
    auto m = fresh_morphism(MorKind::LinearEmbedding, make_proj(k), make_proj(n));
    auto& mm = *m;
    mm.k_ = k;
    mm.n_ = n;
    mm.smooth_ = false;
    mm.descriptor_ = "emb[" + std::to_string(k) + "->" + std::to_string(n) + "]";
    return m;
}

MorphPtr center_embedding(int n, int m) { return linear_embedding(m, n); }

BundleClass normal_bundle_of_center(int n, int m) {
    // N_{P^m | P^n} = O(1)^(n-m)
    auto s = make_proj(m);
    GradedClass c = GradedClass::unit(s);
    if (m >= 1) {
        GradedClass oph = GradedClass::unit(s) + generator_class(s, 0);
        for (int i = 0; i < n - m; ++i) c = c * oph;
    }
    return make_bundle(s, n - m, c);
}

VarietyPtr exceptional_variety(int n, int m) {
    return make_proj_bundle(normal_bundle_of_center(n, m));
}

MorphPtr bundle_projection(const BundleClass& e) {
    if (e.rank < 1) throw InvalidParameters("bundle projection needs rank >= 1");
    if (e.rank == 1) return identity(e.base);
    if (e.base->kind() == VarietyKind::Point) return to_point(make_proj(e.rank - 1));
    if (e.total_chern == GradedClass::unit(e.base)) {
        std::vector<std::vector<int>> slots;
        auto total = make_product_tracked({e.base, make_proj(e.rank - 1)}, &slots);
        return product_projection(total, slots[0]);
    }
    BundleCoords bc = BundleCoords::build(e);
    auto m = fresh_morphism(MorKind::BundleProjection, bc.total, e.base);
    auto& mm = *m;
    mm.bundle_ = std::make_shared<const BundleClass>(e);
    mm.smooth_ = true;
    mm.rel_tangent_ = make_bundle(bc.total, e.rank - 1, bundle_relative_tangent_chern(e, bc));
    mm.descriptor_ = "bpr[" + bc.total->key() + "]";
    return m;
}

MorphPtr zero_section(const BundleClass& e) {
    if (e.rank < 1) throw InvalidParameters("zero section needs rank >= 1");
    if (e.rank == 1) return identity(e.base);
    if (e.base->kind() == VarietyKind::Point) return linear_embedding(0, e.rank - 1);
    if (e.total_chern == GradedClass::unit(e.base)) {
        std::vector<std::vector<int>> slots;
        auto total = make_product_tracked({e.base, make_proj(e.rank - 1)}, &slots);
        std::vector<PmComponent> comps;
        std::vector<int> base_src;
        for (int s = 0; s < slot_count(e.base); ++s) base_src.push_back(s);
        comps.push_back({base_src, slots[0], identity(e.base)});
        comps.push_back({{}, {slots[1][0]}, linear_embedding(0, e.rank - 1)});
        return product_map(e.base, total, std::move(comps));
    }
    BundleCoords bc = BundleCoords::build(e);
    auto m = fresh_morphism(MorKind::ZeroSection, e.base, bc.total);
    auto& mm = *m;
    mm.bundle_ = std::make_shared<const BundleClass>(e);
    mm.smooth_ = false;
    // [s(W)] = sum_{i<rank} q*c_i(E) zeta^(rank-1-i): the top Chern class of
    // the universal quotient twist cutting out the tautological section.
    GradedClass cls(bc.total);
    for (int i = 0; i < e.rank; ++i) cls += bc.lift(e.chern(i), e.rank - 1 - i);
    mm.section_class_ = cls;
    mm.descriptor_ = "zs[" + bc.total->key() + "]";
    return m;
}

MorphPtr exceptional_inclusion(int n, int m) {
    auto bl = make_blowup_linear(n, m);
    auto ev = exceptional_variety(n, m);
    auto mo = fresh_morphism(MorKind::ExceptionalInclusion, ev, bl);
    auto& mm = *mo;
    mm.n_ = n;
    mm.m_ = m;
    mm.bundle_ = std::make_shared<const BundleClass>(normal_bundle_of_center(n, m));
    mm.smooth_ = false;
    mm.descriptor_ = "exc[" + std::to_string(n) + "," + std::to_string(m) + "]";
    return mo;
}

MorphPtr blow_down(int n, int m) {
    auto bl = make_blowup_linear(n, m);
    auto mo = fresh_morphism(MorKind::BlowDown, bl, make_proj(n));
    auto& mm = *mo;
    mm.n_ = n;
    mm.m_ = m;
    mm.smooth_ = false;
    mm.descriptor_ = "bld[" + std::to_string(n) + "," + std::to_string(m) + "]";
    return mo;
}

MorphPtr strict_transform_embedding(int k, int n, int m) {
    if (k < 0 || k + m >= n)
        throw InvalidParameters("strict transform embedding needs k+m < n");
    auto mo = fresh_morphism(MorKind::StrictTransform, make_proj(k), make_blowup_linear(n, m));
    auto& mm = *mo;
    mm.k_ = k;
    mm.n_ = n;
    mm.m_ = m;
    mm.smooth_ = false;
    mm.descriptor_ = "str[" + std::to_string(k) + "," + std::to_string(n) + "," +
                     std::to_string(m) + "]";
    return mo;
}

namespace {

bool slots_cover(const std::vector<PmComponent>& comps, int count, bool src_side) {
    std::set<int> seen;
    for (const auto& c : comps)
        for (int s : (src_side ? c.src_slots : c.dst_slots)) {
            if (!seen.insert(s).second) return false;
        }
    return static_cast<int>(seen.size()) == count;
}

} // namespace

MorphPtr product_map(const VarietyPtr& src, const VarietyPtr& dst,
                     std::vector<PmComponent> comps) {
    // Inline nested product maps.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<PmComponent> next;
        for (auto& c : comps) {
            if (c.m->kind() == MorKind::ProductMap) {
                for (const auto& sub : c.m->pm_components()) {
                    PmComponent nc;
                    for (int s : sub.src_slots) nc.src_slots.push_back(c.src_slots[s]);
                    for (int s : sub.dst_slots) nc.dst_slots.push_back(c.dst_slots[s]);
                    nc.m = sub.m;
                    next.push_back(std::move(nc));
                }
                changed = true;
            } else if (c.m->kind() == MorKind::Identity && c.src_slots.size() > 1) {
                for (size_t j = 0; j < c.src_slots.size(); ++j)
                    next.push_back({{c.src_slots[j]},
                                    {c.dst_slots[j]},
                                    identity(slot_model(c.m->source(), static_cast<int>(j)))});
                changed = true;
            } else {
                next.push_back(std::move(c));
            }
        }
        comps = std::move(next);
    }

    // Components landing in a point: their sources get projected away first.
    std::vector<int> dropped;
    for (const auto& c : comps)
        if (c.dst_slots.empty() || c.m->target()->kind() == VarietyKind::Point)
            dropped.insert(dropped.end(), c.src_slots.begin(), c.src_slots.end());
    if (!dropped.empty()) {
        std::sort(dropped.begin(), dropped.end());
        std::vector<int> kept;
        for (int s = 0; s < slot_count(src); ++s)
            if (!std::binary_search(dropped.begin(), dropped.end(), s)) kept.push_back(s);
        MorphPtr proj = product_projection(src, kept);
        std::vector<PmComponent> remapped;
        for (auto& c : comps) {
            if (c.dst_slots.empty() || c.m->target()->kind() == VarietyKind::Point) continue;
            PmComponent nc;
            for (int s : c.src_slots) {
                auto it = std::lower_bound(kept.begin(), kept.end(), s);
                nc.src_slots.push_back(static_cast<int>(it - kept.begin()));
            }
            nc.dst_slots = c.dst_slots;
            nc.m = c.m;
            remapped.push_back(std::move(nc));
        }
        return compose(product_map(proj->target(), dst, std::move(remapped)), proj);
    }

    if (!slots_cover(comps, slot_count(src), true) || !slots_cover(comps, slot_count(dst), false))
        throw InvalidParameters("product map components must tile both slot lists");

    std::sort(comps.begin(), comps.end(), [](const PmComponent& a, const PmComponent& b) {
        int ma = a.dst_slots.empty() ? -1 : *std::min_element(a.dst_slots.begin(), a.dst_slots.end());
        int mb = b.dst_slots.empty() ? -1 : *std::min_element(b.dst_slots.begin(), b.dst_slots.end());
        return ma < mb;
    });

    bool all_identity = *src == *dst;
    if (all_identity)
        for (const auto& c : comps)
            if (c.m->kind() != MorKind::Identity || c.src_slots != c.dst_slots) {
                all_identity = false;
                break;
            }
    if (all_identity) return identity(src);

    auto mo = fresh_morphism(MorKind::ProductMap, src, dst);
    auto& mm = *mo;
    mm.pm_ = comps;
    bool smooth = true;
    for (const auto& c : comps) smooth = smooth && c.m->is_smooth();
    mm.smooth_ = smooth;
    if (smooth) {
        GradedClass chern = GradedClass::unit(src);
        int rank = 0;
        for (const auto& c : comps) {
            const BundleClass& t = *c.m->relative_tangent_opt();
            chern = chern * inject_class(src, c.src_slots, t.total_chern);
            rank += t.rank;
        }
        mm.rel_tangent_ = make_bundle(src, rank, chern);
    }
    std::string d = "ppm[" + src->key() + "->" + dst->key() + "|";
    for (const auto& c : comps)
        d += "(" + join_ints(c.src_slots) + ">" + join_ints(c.dst_slots) + ":" +
             c.m->descriptor() + ")";
    mm.descriptor_ = d + "]";
    return mo;
}

MorphPtr cross(const std::vector<MorphPtr>& ms) {
    std::vector<VarietyPtr> srcs, dsts;
    for (const auto& m : ms) {
        srcs.push_back(m->source());
        dsts.push_back(m->target());
    }
    std::vector<std::vector<int>> src_slots, dst_slots;
    VarietyPtr src = make_product_tracked(srcs, &src_slots);
    VarietyPtr dst = make_product_tracked(dsts, &dst_slots);
    std::vector<PmComponent> comps;
    for (size_t j = 0; j < ms.size(); ++j)
        comps.push_back({src_slots[j], dst_slots[j], ms[j]});
    return product_map(src, dst, std::move(comps));
}

MorphPtr bundle_base_change(const BundleClass& e, const MorphPtr& g) {
    if (!(*g->target() == *e.base)) throw InvalidParameters("base change map must land in the base");
    if (g->kind() == MorKind::Identity) return identity(make_proj_bundle(e));
    if (e.rank == 1) return g;
    if (e.base->kind() == VarietyKind::Point || e.total_chern == GradedClass::unit(e.base))
        return cross({g, identity(make_proj(e.rank - 1))});
    BundleClass src_bundle = pullback_bundle(g, e);
    BundleCoords src_bc = BundleCoords::build(src_bundle);
    BundleCoords tgt_bc = BundleCoords::build(e);
    auto mo = fresh_morphism(MorKind::BundleBaseChange, src_bc.total, tgt_bc.total);
    auto& mm = *mo;
    mm.inner_ = g;
    mm.bundle_ = std::make_shared<const BundleClass>(e);
    mm.smooth_ = g->is_smooth();
    if (mm.smooth_) {
        const BundleClass& tg = *g->relative_tangent_opt();
        MorphPtr qsrc = bundle_projection(src_bundle);
        mm.rel_tangent_ = make_bundle(src_bc.total, tg.rank, qsrc->pullback(tg.total_chern));
    }
    mm.descriptor_ = "bbc[" + tgt_bc.total->key() + "|" + g->descriptor() + "]";
    return mo;
}

// ---------------------------------------------------------------------------
// Composition with canonical fusion

namespace {

std::vector<MorphPtr> flatten(const MorphPtr& m) {
    if (m->kind() == MorKind::Composite) return m->components();
    return {m};
}

// Tries to fuse b o a into zero, one or two morphisms.
std::optional<std::vector<MorphPtr>> fuse_pair(const MorphPtr& a, const MorphPtr& b) {
    // embeddings compose
    if (a->kind() == MorKind::LinearEmbedding && b->kind() == MorKind::LinearEmbedding)
        return std::vector<MorphPtr>{linear_embedding(a->emb_k(), b->emb_n())};
    if (a->kind() == MorKind::LinearEmbedding && b->kind() == MorKind::StrictTransform)
        return std::vector<MorphPtr>{
            strict_transform_embedding(a->emb_k(), b->bl_n(), b->bl_m())};
    // projections compose
    if (a->kind() == MorKind::ProductProjection && b->kind() == MorKind::ProductProjection) {
        std::vector<int> keep;
        for (int s : b->keep_slots()) keep.push_back(a->keep_slots()[s]);
        return std::vector<MorphPtr>{product_projection(a->source(), keep)};
    }
    // product maps compose when groups tile one to one
    if (a->kind() == MorKind::ProductMap && b->kind() == MorKind::ProductMap) {
        std::vector<PmComponent> fused;
        std::vector<bool> used(a->pm_components().size(), false);
        bool ok = true;
        for (const auto& bc : b->pm_components()) {
            if (bc.src_slots.empty()) {
                fused.push_back(bc);
                continue;
            }
            std::set<int> want(bc.src_slots.begin(), bc.src_slots.end());
            int found = -1;
            for (size_t i = 0; i < a->pm_components().size(); ++i) {
                const auto& ac = a->pm_components()[i];
                bool overlap = false;
                for (int s : ac.dst_slots)
                    if (want.count(s)) overlap = true;
                if (!overlap) continue;
                std::set<int> have(ac.dst_slots.begin(), ac.dst_slots.end());
                if (found != -1 || have != want) {
                    ok = false;
                    break;
                }
                found = static_cast<int>(i);
            }
            if (!ok || found == -1) {
                ok = false;
                break;
            }
            used[found] = true;
            const auto& ac = a->pm_components()[found];
            // reorder: bc.src_slots lists a-dst slots; component sources align
            // only when the slot lists agree
            if (ac.dst_slots != bc.src_slots) {
                ok = false;
                break;
            }
            fused.push_back({ac.src_slots, bc.dst_slots, compose(bc.m, ac.m)});
        }
        for (bool u : used)
            ok = ok && true, (void)u;
        if (ok) {
            for (size_t i = 0; i < used.size(); ++i)
                if (!used[i]) ok = false;
        }
        if (ok) return std::vector<MorphPtr>{product_map(a->source(), b->target(), fused)};
    }
    // project after a product map: drop unneeded components
    if (a->kind() == MorKind::ProductMap && b->kind() == MorKind::ProductProjection) {
        const auto& keep = b->keep_slots();
        std::set<int> keepset(keep.begin(), keep.end());
        std::vector<const PmComponent*> kept_comps;
        std::vector<int> kept_src;
        bool ok = true;
        for (const auto& c : a->pm_components()) {
            int in = 0;
            for (int s : c.dst_slots)
                if (keepset.count(s)) ++in;
            if (in == 0) continue;
            if (in != static_cast<int>(c.dst_slots.size())) {
                ok = false;
                break;
            }
            kept_comps.push_back(&c);
            kept_src.insert(kept_src.end(), c.src_slots.begin(), c.src_slots.end());
        }
        if (ok) {
            std::sort(kept_src.begin(), kept_src.end());
            MorphPtr proj = product_projection(a->source(), kept_src);
            std::vector<PmComponent> remapped;
            for (const PmComponent* c : kept_comps) {
                PmComponent nc;
                for (int s : c->src_slots) {
                    auto it = std::lower_bound(kept_src.begin(), kept_src.end(), s);
                    nc.src_slots.push_back(static_cast<int>(it - kept_src.begin()));
                }
                for (int s : c->dst_slots) {
                    auto it = std::lower_bound(keep.begin(), keep.end(), s);
                    nc.dst_slots.push_back(static_cast<int>(it - keep.begin()));
                }
                nc.m = c->m;
                remapped.push_back(std::move(nc));
            }
            return std::vector<MorphPtr>{
                proj, product_map(proj->target(), b->target(), std::move(remapped))};
        }
    }
    // section followed by its projection
    if (a->kind() == MorKind::ZeroSection && b->kind() == MorKind::BundleProjection &&
        bundle_equal(*a->bundle(), *b->bundle()))
        return std::vector<MorphPtr>{};
    // base change then projection = projection then base map
    if (a->kind() == MorKind::BundleBaseChange && b->kind() == MorKind::BundleProjection &&
        bundle_equal(*a->bundle(), *b->bundle())) {
        BundleClass src_bundle = pullback_bundle(a->inner(), *a->bundle());
        return std::vector<MorphPtr>{bundle_projection(src_bundle), a->inner()};
    }
    // base changes compose
    if (a->kind() == MorKind::BundleBaseChange && b->kind() == MorKind::BundleBaseChange &&
        bundle_equal(*a->bundle(), pullback_bundle(b->inner(), *b->bundle())))
        return std::vector<MorphPtr>{
            bundle_base_change(*b->bundle(), compose(b->inner(), a->inner()))};
    // section then base change = base map then section
    if (a->kind() == MorKind::ZeroSection && b->kind() == MorKind::BundleBaseChange &&
        bundle_equal(*a->bundle(), pullback_bundle(b->inner(), *b->bundle())))
        return std::vector<MorphPtr>{b->inner(), zero_section(*b->bundle())};
    return std::nullopt;
}

} // namespace

MorphPtr compose(const MorphPtr& after, const MorphPtr& before) {
    if (!(*before->target() == *after->source()))
        throw InvalidParameters("compose: target/source mismatch: " + before->descriptor() +
                                " then " + after->descriptor());
    VarietyPtr src = before->source();
    VarietyPtr tgt = after->target();
    std::vector<MorphPtr> comps = flatten(before);
    for (const auto& c : flatten(after)) comps.push_back(c);

    bool changed = true;
    while (changed) {
        changed = false;
        // identities vanish
        for (size_t i = 0; i < comps.size(); ++i) {
            if (comps[i]->kind() == MorKind::Identity) {
                comps.erase(comps.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // anything followed by the point map collapses
        for (size_t i = 1; i < comps.size(); ++i) {
            if (comps[i]->kind() == MorKind::ToPoint) {
                MorphPtr collapsed = to_point(comps[0]->source());
                comps.erase(comps.begin(), comps.begin() + static_cast<long>(i + 1));
                comps.insert(comps.begin(), collapsed);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        for (size_t i = 0; i + 1 < comps.size(); ++i) {
            auto fused = fuse_pair(comps[i], comps[i + 1]);
            if (fused) {
                comps.erase(comps.begin() + static_cast<long>(i),
                            comps.begin() + static_cast<long>(i + 2));
                comps.insert(comps.begin() + static_cast<long>(i), fused->begin(), fused->end());
                changed = true;
                break;
            }
        }
    }

    if (comps.empty()) return identity(src);
    if (comps.size() == 1) return comps[0];

    auto mo = fresh_morphism(MorKind::Composite, src, tgt);
    auto& mm = *mo;
    mm.comps_ = comps;
    bool smooth = true;
    for (const auto& c : comps) smooth = smooth && c->is_smooth();
    mm.smooth_ = smooth;
    if (smooth) {
        BundleClass t = *comps[0]->relative_tangent_opt();
        for (size_t i = 1; i < comps.size(); ++i) {
            GradedClass ch = comps[i]->relative_tangent_opt()->total_chern;
            for (size_t j = i; j-- > 0;) ch = comps[j]->pullback(ch);
            t = make_bundle(src, t.rank + comps[i]->relative_tangent_opt()->rank,
                            t.total_chern * ch);
        }
        mm.rel_tangent_ = t;
    }
    std::string d = "cmp[";
    for (size_t i = 0; i < comps.size(); ++i) {
        if (i) d += ";";
        d += comps[i]->descriptor();
    }
    mm.descriptor_ = d + "]";
    return mo;
}

// ---------------------------------------------------------------------------
// Pullback / pushforward

GradedClass MorphismModel::monomial_pullback(int degree, int index) const {
    switch (kind_) {
    case MorKind::Identity:
        return monomial_class(source_, degree, index, YPolynomial(1));
    case MorKind::ToPoint:
        return GradedClass::unit(source_); // only the degree-0 monomial exists upstairs
    case MorKind::ProductProjection: {
        const ExpVec& te = target_->basis_exp(degree, index);
        ExpVec full(source_->gen_count(), 0);
        place_exp(source_, keep_slots_, te, full);
        auto slot = source_->basis_lookup(full);
        assert(slot);
        return monomial_class(source_, slot->first, slot->second, YPolynomial(1));
    }
    case MorKind::BundleProjection: {
        BundleCoords bc = BundleCoords::build(*bundle_);
        auto slot = bc.from_base(degree, index, 0);
        assert(slot);
        return monomial_class(source_, slot->first, slot->second, YPolynomial(1));
    }
    case MorKind::LinearEmbedding:
        return degree <= k_ ? monomial_class(source_, degree, 0, YPolynomial(1))
                            : GradedClass(source_);
    case MorKind::ZeroSection: {
        BundleCoords bc = BundleCoords::build(*bundle_);
        auto [bd, bi, k] = bc.to_base(degree, index);
        return k == 0 ? monomial_class(source_, bd, bi, YPolynomial(1)) : GradedClass(source_);
    }
    case MorKind::ExceptionalInclusion: {
        // h restricts to the center's hyperplane class, e to -zeta.
        const ExpVec& te = target_->basis_exp(degree, index); // (a, b)
        int a = te[0], b = te[1];
        BundleCoords bc = BundleCoords::build(*bundle_);
        if (a > bundle_->base->dim()) return GradedClass(source_);
        auto slot = bc.from_base(a, 0, b);
        if (!slot) return GradedClass(source_);
        return monomial_class(source_, slot->first, slot->second,
                              YPolynomial(b % 2 == 0 ? 1 : -1));
    }
    case MorKind::BlowDown: {
        return exp_class(source_, ExpVec{degree, 0});
    }
    case MorKind::StrictTransform: {
        const ExpVec& te = target_->basis_exp(degree, index);
        if (te[1] != 0 || te[0] > k_) return GradedClass(source_);
        return monomial_class(source_, te[0], 0, YPolynomial(1));
    }
    case MorKind::ProductMap: {
        const ExpVec& te = target_->basis_exp(degree, index);
        std::vector<std::pair<ExpVec, Rational>> acc = {{ExpVec(source_->gen_count(), 0), Rational(1)}};
        for (const auto& c : pm_) {
            ExpVec sub = extract_exp(target_, te, c.dst_slots);
            auto slot = c.m->target()->basis_lookup(sub);
            assert(slot);
            GradedClass cls = c.m->monomial_pullback(slot->first, slot->second);
            std::vector<std::pair<ExpVec, Rational>> next;
            for (const auto& [d2, vec] : cls.components()) {
                for (size_t i2 = 0; i2 < vec.size(); ++i2) {
                    if (vec[i2].is_zero()) continue;
                    Rational r2 = vec[i2].coeff(0);
                    for (const auto& [e0, c0] : acc) {
                        ExpVec e1 = e0;
                        place_exp(source_, c.src_slots,
                                  c.m->source()->basis_exp(d2, static_cast<int>(i2)), e1);
                        next.push_back({std::move(e1), c0 * r2});
                    }
                }
            }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        GradedClass out(source_);
        for (const auto& [e, c] : acc) {
            auto slot = source_->basis_lookup(e);
            assert(slot);
            out.add_coeff(slot->first, slot->second, YPolynomial(c));
        }
        return out;
    }
    case MorKind::BundleBaseChange: {
        BundleCoords tbc = BundleCoords::build(*bundle_);
        BundleClass src_bundle = pullback_bundle(inner_, *bundle_);
        BundleCoords sbc = BundleCoords::build(src_bundle);
        auto [bd, bi, k] = tbc.to_base(degree, index);
        GradedClass w = inner_->monomial_pullback(bd, bi);
        return sbc.lift(w, k);
    }
    case MorKind::Composite: {
        GradedClass c = monomial_class(target_, degree, index, YPolynomial(1));
        for (size_t i = comps_.size(); i-- > 0;) c = comps_[i]->pullback(c);
        return c;
    }
    default:
        throw UnsupportedMorphism("pullback for kind");
    }
}

GradedClass MorphismModel::monomial_pushforward(int degree, int index) const {
    switch (kind_) {
    case MorKind::Identity:
        return monomial_class(target_, degree, index, YPolynomial(1));
    case MorKind::ToPoint: {
        GradedClass out(target_);
        if (degree == source_->dim()) out.set_coeff(0, 0, YPolynomial(1));
        return out;
    }
    case MorKind::ProductProjection: {
        const ExpVec& se = source_->basis_exp(degree, index);
        for (int s = 0; s < slot_count(source_); ++s) {
            if (std::binary_search(keep_slots_.begin(), keep_slots_.end(), s)) continue;
            ExpVec part = extract_exp(source_, se, {s});
            int d = 0;
            for (int k : part) d += k;
            if (d != slot_model(source_, s)->dim()) return GradedClass(target_);
        }
        ExpVec kept = extract_exp(source_, se, keep_slots_);
        auto slot = target_->basis_lookup(kept);
        assert(slot);
        return monomial_class(target_, slot->first, slot->second, YPolynomial(1));
    }
    case MorKind::BundleProjection: {
        BundleCoords bc = BundleCoords::build(*bundle_);
        auto [bd, bi, k] = bc.to_base(degree, index);
        return k == bundle_->rank - 1 ? monomial_class(target_, bd, bi, YPolynomial(1))
                                      : GradedClass(target_);
    }
    case MorKind::LinearEmbedding:
        return monomial_class(target_, degree + (n_ - k_), 0, YPolynomial(1));
    case MorKind::ZeroSection: {
        BundleCoords bc = BundleCoords::build(*bundle_);
        GradedClass lifted = bc.lift(monomial_class(source_, degree, index, YPolynomial(1)), 0);
        return lifted * section_class_;
    }
    case MorKind::ExceptionalInclusion: {
        BundleCoords bc = BundleCoords::build(*bundle_);
        auto [bd, bi, k] = bc.to_base(degree, index);
        GradedClass cls = exp_class(target_, ExpVec{bd, k + 1});
        return cls.scaled(YPolynomial(k % 2 == 0 ? 1 : -1));
    }
    case MorKind::BlowDown: {
        const ExpVec& se = source_->basis_exp(degree, index);
        if (se[1] != 0) return GradedClass(target_);
        return monomial_class(target_, se[0], 0, YPolynomial(1));
    }
    case MorKind::StrictTransform:
        return exp_class(target_, ExpVec{n_ - k_ + degree, 0});
    case MorKind::ProductMap: {
        const ExpVec& se = source_->basis_exp(degree, index);
        std::vector<std::pair<ExpVec, Rational>> acc = {{ExpVec(target_->gen_count(), 0), Rational(1)}};
        for (const auto& c : pm_) {
            GradedClass cls;
            if (c.src_slots.empty()) {
                cls = c.m->monomial_pushforward(0, 0);
            } else {
                ExpVec sub = extract_exp(source_, se, c.src_slots);
                auto slot = c.m->source()->basis_lookup(sub);
                assert(slot);
                cls = c.m->monomial_pushforward(slot->first, slot->second);
            }
            std::vector<std::pair<ExpVec, Rational>> next;
            for (const auto& [d2, vec] : cls.components()) {
                for (size_t i2 = 0; i2 < vec.size(); ++i2) {
                    if (vec[i2].is_zero()) continue;
                    Rational r2 = vec[i2].coeff(0);
                    for (const auto& [e0, c0] : acc) {
                        ExpVec e1 = e0;
                        place_exp(target_, c.dst_slots,
                                  c.m->target()->basis_exp(d2, static_cast<int>(i2)), e1);
                        next.push_back({std::move(e1), c0 * r2});
                    }
                }
            }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        GradedClass out(target_);
        for (const auto& [e, c] : acc) {
            auto slot = target_->basis_lookup(e);
            assert(slot);
            out.add_coeff(slot->first, slot->second, YPolynomial(c));
        }
        return out;
    }
    case MorKind::BundleBaseChange: {
        BundleCoords tbc = BundleCoords::build(*bundle_);
        BundleClass src_bundle = pullback_bundle(inner_, *bundle_);
        BundleCoords sbc = BundleCoords::build(src_bundle);
        auto [wd, wi, k] = sbc.to_base(degree, index);
        GradedClass y = inner_->monomial_pushforward(wd, wi);
        return tbc.lift(y, k);
    }
    case MorKind::Composite: {
        GradedClass c = monomial_class(source_, degree, index, YPolynomial(1));
        for (const auto& comp : comps_) c = comp->pushforward(c);
        return c;
    }
    default:
        throw UnsupportedMorphism("pushforward for kind");
    }
}

GradedClass MorphismModel::pullback(const GradedClass& c) const {
    if (!c.has_ambient() || !(*c.ambient() == *target_))
        throw AmbientMismatch("pullback along " + descriptor_);
    GradedClass out(source_);
    for (const auto& [d, vec] : c.components())
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i].is_zero()) continue;
            out += monomial_pullback(d, static_cast<int>(i)).scaled(vec[i]);
        }
    return out;
}

GradedClass MorphismModel::pushforward(const GradedClass& c) const {
    if (!c.has_ambient() || !(*c.ambient() == *source_))
        throw AmbientMismatch("pushforward along " + descriptor_);
    GradedClass out(target_);
    for (const auto& [d, vec] : c.components())
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i].is_zero()) continue;
            out += monomial_pushforward(d, static_cast<int>(i)).scaled(vec[i]);
        }
    return out;
}

GradedClass pullback_class(const MorphPtr& m, const GradedClass& c) { return m->pullback(c); }
GradedClass pushforward_class(const MorphPtr& m, const GradedClass& c) { return m->pushforward(c); }

BundleClass relative_tangent(const MorphPtr& m) {
    if (!m->is_smooth() || !m->relative_tangent_opt())
        throw NotSmooth("relative tangent of " + m->descriptor());
    return *m->relative_tangent_opt();
}

BundleClass pullback_bundle(const MorphPtr& m, const BundleClass& e) {
    if (!(*e.base == *m->target())) throw AmbientMismatch("bundle pullback base mismatch");
    return make_bundle(m->source(), e.rank, m->pullback(e.total_chern));
}

} // namespace motbiv
