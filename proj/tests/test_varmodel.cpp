#include "doctest.h"

#include "motbiv/errors.hpp"
#include "motbiv/variety.hpp"

using namespace motbiv;

namespace {

YPolynomial chern_top_integral(const VarietyPtr& x) {
    GradedClass top = x->tangent_chern().homogeneous_part(x->dim());
    return integrate(x, top);
}

} // namespace

TEST_CASE("point and projective space models") {
    auto pt = make_point();
    CHECK(pt->dim() == 0);
    CHECK(pt->tangent_chern() == GradedClass::unit(pt));

    auto p2 = make_proj(2);
    CHECK(p2->dim() == 2);
    for (int d = 0; d <= 2; ++d) CHECK(p2->rank(d) == 1);
    GradedClass expect = GradedClass::unit(p2);
    expect.set_coeff(1, 0, YPolynomial(3));
    expect.set_coeff(2, 0, YPolynomial(3));
    CHECK(p2->tangent_chern() == expect); // (1+h)^3 mod h^3

    CHECK(make_proj(0)->key() == "pt");
    CHECK_THROWS_AS(make_proj(-1), InvalidParameters);
}

TEST_CASE("integration picks out the point class") {
    auto p2 = make_proj(2);
    CHECK(integrate(p2, monomial_class(p2, 2, 0, YPolynomial(1))) == YPolynomial(1));
    CHECK(integrate(make_proj(1), GradedClass::unit(make_proj(1))) == YPolynomial());

    // Frozen oracle: td(TP^2) from expanding (h/(1-e^{-h}))^3 to degree 2 is
    // 1 + 3/2 h + h^2, whose integral is 1.
    GradedClass td = GradedClass::unit(p2);
    td.set_coeff(1, 0, YPolynomial(Rational(3, 2)));
    td.set_coeff(2, 0, YPolynomial(1));
    CHECK(integrate(p2, td) == YPolynomial(1));

    CHECK_THROWS_AS(integrate(p2, GradedClass::unit(make_proj(1))), AmbientMismatch);
}

TEST_CASE("products flatten, sort and drop point factors") {
    auto p1 = make_proj(1);
    auto p2 = make_proj(2);
    auto a = make_product(p2, p1);
    auto b = make_product(p1, p2);
    CHECK(a->key() == b->key());
    CHECK(a->key() == "prod(P(1),P(2))");
    CHECK(a->dim() == 3);
    CHECK(make_product(p1, make_point())->key() == "P(1)");

    auto nested = make_product(p1, make_product(p1, p2));
    CHECK(nested->key() == "prod(P(1),prod(P(1),P(2)))");
    CHECK(nested->factors().size() == 3);

    auto p1p1 = make_product(p1, p1);
    CHECK(p1p1->rank(0) == 1);
    CHECK(p1p1->rank(1) == 2);
    CHECK(p1p1->rank(2) == 1);
    // c(T) = (1+2h1)(1+2h2)
    GradedClass t = p1p1->tangent_chern();
    CHECK(t.coeff(1, 0) == YPolynomial(2));
    CHECK(t.coeff(1, 1) == YPolynomial(2));
    CHECK(t.coeff(2, 0) == YPolynomial(4));
}

TEST_CASE("projective bundle model with the Grothendieck relation") {
    auto p2 = make_proj(2);
    auto tp2 = tangent_bundle(p2);
    auto pe = make_proj_bundle(tp2); // P(TP^2), dim 3
    CHECK(pe->dim() == 3);
    CHECK(pe->rank(0) == 1);
    CHECK(pe->rank(1) == 2);
    CHECK(pe->rank(2) == 2);
    CHECK(pe->rank(3) == 1);

    // zeta^2 = -3 h zeta - 3 h^2
    GradedClass z2 = exp_class(pe, ExpVec{0, 2});
    GradedClass expect(pe);
    expect.add_coeff(2, 1, YPolynomial(-3)); // h*zeta
    expect.add_coeff(2, 0, YPolynomial(-3)); // h^2
    CHECK(z2 == expect);

    CHECK(integrate(pe, pe->tangent_chern().homogeneous_part(3)) ==
          YPolynomial(Rational(pe->euler_characteristic())));

    // Normalizations
    CHECK(make_proj_bundle(trivial_bundle(make_point(), 3))->key() == "P(2)");
    CHECK(make_proj_bundle(trivial_bundle(p2, 2))->key() == "prod(P(1),P(2))");
    GradedClass line_chern = GradedClass::unit(p2) + generator_class(p2, 0);
    CHECK(make_proj_bundle(make_bundle(p2, 1, line_chern))->key() == "P(2)");
    CHECK_THROWS_AS(make_proj_bundle(trivial_bundle(p2, 0)), InvalidParameters);
}

TEST_CASE("bundle class invariants") {
    auto p1 = make_proj(1);
    GradedClass bad = GradedClass::unit(p1);
    bad.set_coeff(1, 0, YPolynomial::y());
    CHECK_THROWS_AS(make_bundle(p1, 1, bad), InvalidParameters); // not y-free

    GradedClass c1 = GradedClass::unit(p1) + generator_class(p1, 0);
    CHECK_THROWS_AS(make_bundle(p1, 0, c1), InvalidParameters); // c_1 above rank 0

    BundleClass a = make_bundle(p1, 1, c1);
    BundleClass s = bundle_sum(a, trivial_bundle(p1, 1));
    CHECK(s.rank == 2);
    CHECK(s.total_chern == c1);
}

TEST_CASE("blow-up presentation oracle: Betti ranks") {
    auto bl20 = make_blowup_linear(2, 0);
    CHECK(bl20->rank(0) == 1);
    CHECK(bl20->rank(1) == 2);
    CHECK(bl20->rank(2) == 1);

    auto bl31 = make_blowup_linear(3, 1);
    CHECK(bl31->rank(0) == 1);
    CHECK(bl31->rank(1) == 2);
    CHECK(bl31->rank(2) == 2);
    CHECK(bl31->rank(3) == 1);

    CHECK_THROWS_AS(make_blowup_linear(2, 2), InvalidParameters);
    CHECK_THROWS_AS(make_blowup_linear(2, -1), InvalidParameters);
}

TEST_CASE("blow-up ring relations derived from the projection model") {
    auto bl20 = make_blowup_linear(2, 0);
    CHECK(exp_class(bl20, ExpVec{1, 1}).is_zero());             // h e = 0
    GradedClass e2 = exp_class(bl20, ExpVec{0, 2});
    CHECK(e2 == monomial_class(bl20, 2, 0, YPolynomial(-1)));   // e^2 = -h^2

    auto bl31 = make_blowup_linear(3, 1);
    CHECK(exp_class(bl31, ExpVec{2, 1}).is_zero());             // h^2 e = 0
    GradedClass e2b = exp_class(bl31, ExpVec{0, 2});            // e^2 = 2he - h^2
    GradedClass expect(bl31);
    expect.add_coeff(2, 1, YPolynomial(2));
    expect.add_coeff(2, 0, YPolynomial(-1));
    CHECK(e2b == expect);
    CHECK(exp_class(bl31, ExpVec{0, 3}) ==
          monomial_class(bl31, 3, 0, YPolynomial(-2)));         // e^3 = -2h^3
}

TEST_CASE("blow-up oracle: top Chern class integrates to the Euler characteristic") {
    CHECK(make_blowup_linear(2, 0)->euler_characteristic() == 4);
    CHECK(make_blowup_linear(3, 1)->euler_characteristic() == 6);
    for (auto x : {make_blowup_linear(2, 0), make_blowup_linear(3, 1),
                   make_blowup_linear(3, 0), make_blowup_linear(4, 1)})
        CHECK(chern_top_integral(x) == YPolynomial(Rational(x->euler_characteristic())));
}

TEST_CASE("rank symmetry and vanishing integrals below the top degree") {
    std::vector<VarietyPtr> spaces = {
        make_proj(3), make_product(make_proj(1), make_proj(2)),
        make_proj_bundle(tangent_bundle(make_proj(2))), make_blowup_linear(3, 1),
        make_blowup_linear(4, 2)};
    for (const auto& x : spaces) {
        for (int d = 0; d <= x->dim(); ++d) CHECK(x->rank(d) == x->rank(x->dim() - d));
        for (int d = 0; d < x->dim(); ++d)
            for (int i = 0; i < x->rank(d); ++i)
                CHECK(integrate(x, monomial_class(x, d, i, YPolynomial(1))) == YPolynomial());
        CHECK(chern_top_integral(x) == YPolynomial(Rational(x->euler_characteristic())));
    }
}

TEST_CASE("construction trees are memoized") {
    CHECK(make_proj(2).get() == make_proj(2).get());
    CHECK(make_product(make_proj(1), make_proj(2)).get() ==
          make_product(make_proj(2), make_proj(1)).get());
}

#include "motbiv/morphism.hpp"

namespace {

motbiv::GradedClass rand_cls(const motbiv::VarietyPtr& x, uint64_t seed) {
    using namespace motbiv;
    GradedClass c(x);
    uint64_t s = seed;
    auto next = [&s]() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    for (int d = 0; d <= x->dim(); ++d)
        for (int i = 0; i < x->rank(d); ++i)
            c.add_coeff(d, i, YPolynomial(Rational(static_cast<long>(next() % 7) - 3)));
    return c;
}

} // namespace

TEST_CASE("identity and point morphism tables") {
    using namespace motbiv;
    auto p2 = make_proj(2);
    auto id = identity(p2);
    GradedClass c = rand_cls(p2, 1);
    CHECK(pullback_class(id, c) == c);
    CHECK(pushforward_class(id, c) == c);
    CHECK(relative_tangent(id).rank == 0);

    auto f = to_point(make_proj(1));
    GradedClass h = generator_class(make_proj(1), 0);
    CHECK(pushforward_class(f, h) == GradedClass::unit(make_point()));   // degree map
    CHECK(pushforward_class(f, GradedClass::unit(make_proj(1))).is_zero()); // dimension drop
    CHECK(relative_tangent(f).total_chern == make_proj(1)->tangent_chern());
    CHECK(to_point(make_point())->kind() == MorKind::Identity);
}

TEST_CASE("product projections: pullback, fiber integration, projection formula") {
    using namespace motbiv;
    auto p1 = make_proj(1);
    auto p2 = make_proj(2);
    auto prod = make_product(p2, p1); // sorted: [P(1), P(2)]
    // projection onto the P(2) factor (slot 1 after sorting)
    auto pr = product_projection(prod, {1});
    CHECK(*pr->target() == *p2);
    GradedClass h2 = generator_class(p2, 0);
    GradedClass pulled = pullback_class(pr, h2);
    // pr_* integrates over the dropped P(1) fiber
    CHECK(pushforward_class(pr, pulled).is_zero());
    GradedClass h1_fiber = generator_class(prod, 0); // generator of the P(1) slot
    CHECK(pushforward_class(pr, pulled * h1_fiber) == h2);

    // projection formula f_*(f^*(a) b) = a f_*(b) on the spec's instance
    auto sq = make_product(p1, p1);
    auto pr1 = product_projection(sq, {0});
    GradedClass a = generator_class(p1, 0);
    GradedClass b = generator_class(sq, 1); // 1 x h
    CHECK(pushforward_class(pr1, pullback_class(pr1, a) * b) == a * pushforward_class(pr1, b));
    CHECK(pushforward_class(pr1, b) == GradedClass::unit(p1));

    // relative tangent of pr1 is the tangent line along the second factor
    BundleClass t = relative_tangent(pr1);
    CHECK(t.rank == 1);
    CHECK(t.total_chern == GradedClass::unit(sq) + generator_class(sq, 1).scaled(YPolynomial(2)));
}

TEST_CASE("linear embeddings and blow-down tables") {
    using namespace motbiv;
    auto emb = linear_embedding(1, 3); // P^1 in P^3
    CHECK(pushforward_class(emb, GradedClass::unit(make_proj(1))) ==
          monomial_class(make_proj(3), 2, 0, YPolynomial(1)));
    CHECK(pullback_class(emb, generator_class(make_proj(3), 0)) ==
          generator_class(make_proj(1), 0));
    CHECK_FALSE(emb->is_smooth());
    CHECK_THROWS_AS(relative_tangent(emb), NotSmooth);
    CHECK(linear_embedding(2, 2)->kind() == MorKind::Identity);

    auto q = blow_down(2, 0);
    auto bl = make_blowup_linear(2, 0);
    CHECK(pullback_class(q, generator_class(make_proj(2), 0)) == generator_class(bl, 0));
    CHECK(pushforward_class(q, GradedClass::unit(bl)) == GradedClass::unit(make_proj(2)));
    CHECK(pushforward_class(q, generator_class(bl, 1)).is_zero()); // e pushes to 0
    // q_*(e^2) = -h^2
    CHECK(pushforward_class(q, exp_class(bl, ExpVec{0, 2})) ==
          monomial_class(make_proj(2), 2, 0, YPolynomial(-1)));
}

TEST_CASE("exceptional inclusion matches the blow-up presentation") {
    using namespace motbiv;
    // Bl_pt P^2: E = P^1 after normalization
    auto ip = exceptional_inclusion(2, 0);
    auto bl = make_blowup_linear(2, 0);
    CHECK(*ip->source() == *make_proj(1));
    CHECK(pushforward_class(ip, GradedClass::unit(make_proj(1))) == generator_class(bl, 1));
    // point of E pushes to [pt] = h^2 (since e^2 = -h^2)
    CHECK(pushforward_class(ip, generator_class(make_proj(1), 0)) ==
          monomial_class(bl, 2, 0, YPolynomial(1)));
    CHECK(pullback_class(ip, generator_class(bl, 0)).is_zero());        // h|_E = 0 over a point center
    CHECK(pullback_class(ip, generator_class(bl, 1)) ==
          generator_class(make_proj(1), 0).scaled(YPolynomial(-1)));    // e|_E = -zeta

    // Bl_{P^1} P^3: honest bundle exceptional
    auto ip31 = exceptional_inclusion(3, 1);
    auto ev = exceptional_variety(3, 1);
    auto bl31 = make_blowup_linear(3, 1);
    CHECK(ev->kind() == VarietyKind::ProjBundle);
    CHECK(pushforward_class(ip31, GradedClass::unit(ev)) == generator_class(bl31, 1));
    // deg q_*(e^n) consistency: int_Bl e^3 = -int_E zeta^2
    GradedClass e3 = exp_class(bl31, ExpVec{0, 3});
    GradedClass z2 = exp_class(ev, ExpVec{0, 2});
    CHECK(integrate(bl31, e3) == -integrate(ev, z2)); // both -2 here
    CHECK(integrate(ev, z2) == YPolynomial(2));
}

TEST_CASE("bundle projections and zero sections") {
    using namespace motbiv;
    auto p2 = make_proj(2);
    BundleClass tp2 = tangent_bundle(p2);
    auto q = bundle_projection(tp2);
    auto pe = make_proj_bundle(tp2);
    CHECK(*q->source() == *pe);
    // q_* picks the zeta^(r-1) layer
    CHECK(pushforward_class(q, exp_class(pe, ExpVec{0, 0, 1})) == GradedClass::unit(p2));
    CHECK(pushforward_class(q, exp_class(pe, ExpVec{1, 0, 0})).is_zero());
    // projection formula on random classes
    GradedClass a = rand_cls(p2, 5), b = rand_cls(pe, 6);
    CHECK(pushforward_class(q, pullback_class(q, a) * b) == a * pushforward_class(q, b));

    auto s = zero_section(tp2);
    CHECK(compose(q, s)->kind() == MorKind::Identity);
    // s_*(1) = zeta + c_1 = zeta + 3h
    GradedClass scls = pushforward_class(s, GradedClass::unit(p2));
    CHECK(scls == exp_class(pe, ExpVec{0, 0, 1}) + exp_class(pe, ExpVec{1, 0, 0}).scaled(YPolynomial(3)));
    CHECK(pullback_class(s, exp_class(pe, ExpVec{0, 0, 1})).is_zero());
    // q after s is the identity also on classes
    CHECK(pushforward_class(q, scls) == GradedClass::unit(p2));

    // normalized forms
    CHECK(bundle_projection(trivial_bundle(p2, 2))->kind() == MorKind::ProductProjection);
    CHECK(bundle_projection(trivial_bundle(make_point(), 3))->kind() == MorKind::ToPoint);
    CHECK(zero_section(trivial_bundle(make_point(), 3))->kind() == MorKind::LinearEmbedding);
}

TEST_CASE("composition fuses canonically and satisfies Whitney") {
    using namespace motbiv;
    auto p1 = make_proj(1);
    auto sq = make_product(p1, p1);
    auto pr0 = product_projection(sq, {0});
    auto down = to_point(p1);
    auto comp = compose(down, pr0);
    CHECK(comp->kind() == MorKind::ToPoint);
    CHECK(*comp->source() == *sq);
    // Whitney: c(T_{gf}) = c(T_f) f^*c(T_g)
    CHECK(relative_tangent(comp).total_chern ==
          relative_tangent(pr0).total_chern * pullback_class(pr0, relative_tangent(down).total_chern));

    // embedding then point map collapses
    CHECK(compose(to_point(p1), linear_embedding(0, 1))->kind() == MorKind::Identity);

    // a genuinely composite chain keeps its pieces
    auto chain = compose(linear_embedding(2, 3), blow_down(2, 0));
    CHECK(chain->kind() == MorKind::Composite);
    CHECK(pushforward_class(chain, GradedClass::unit(make_blowup_linear(2, 0))) ==
          monomial_class(make_proj(3), 1, 0, YPolynomial(1)));
    CHECK_FALSE(chain->is_smooth());

    // cross of morphisms: (P^1 -> pt) x id collapses to a projection
    auto crossed = cross({to_point(p1), identity(p1)});
    CHECK(crossed->kind() == MorKind::ProductProjection);
}

TEST_CASE("bundle base change commutes with projection and pushforward") {
    using namespace motbiv;
    auto p2 = make_proj(2);
    BundleClass tp2 = tangent_bundle(p2);
    auto emb = linear_embedding(1, 2);
    BundleClass pulled = pullback_bundle(emb, tp2);
    CHECK(pulled.rank == 2);
    auto bc = bundle_base_change(tp2, emb);
    CHECK(*bc->target() == *make_proj_bundle(tp2));
    CHECK(*bc->source() == *make_proj_bundle(pulled));
    // base-change square: q^* emb_* = bc_* q'^*
    auto q = bundle_projection(tp2);
    auto qp = bundle_projection(pulled);
    GradedClass a = rand_cls(make_proj(1), 9);
    CHECK(pullback_class(q, pushforward_class(emb, a)) ==
          pushforward_class(bc, pullback_class(qp, a)));
    // fusion: projection after base change
    auto fused = compose(q, bc);
    CHECK(fused->kind() == MorKind::Composite);
    CHECK(fused->components().size() == 2);
    CHECK(fused->components()[0]->kind() == MorKind::BundleProjection);
    CHECK(fused->components()[1]->kind() == MorKind::LinearEmbedding);
}
