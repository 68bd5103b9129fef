#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hwbt/monodromy.hpp"

#include <algorithm>
#include <set>

using namespace hwbt;

namespace {

SeriesCtx ctx_p(long p, int deg = 1, int e = 1, int prec = 64) {
    return SeriesCtx(ff_make(p, deg), e, prec);
}

LSeries uni(const SeriesCtx& cx) { return LSeries::uniformizer(cx); }

LSeries tpow(const SeriesCtx& cx, std::initializer_list<long long> exps) {
    std::vector<std::pair<long long, FFElem>> ts;
    for (long long e : exps) ts.push_back({e, FFElem::one(cx.k)});
    return LSeries::from_terms(cx, ts);
}

bool some_root_agrees(const TameRootSystem& R, const LSeries& x, long long overlap = 8) {
    for (const auto& r : R.roots) {
        if (!x.is_nonzero() && !r.is_nonzero()) return true;
        if (x.is_nonzero() && r.is_nonzero() && ls_agree(x, r, overlap)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("additive polynomial construction and evaluation") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t, t});  // X^4 + t X^2 + t X

    CHECK(P.c == 2);
    CHECK(P.degree() == 4);
    CHECK(P.p() == 2);
    CHECK(P.generic_i0() == 0);
    CHECK(P.special_i0() == 2);  // no unit among a_1, a_2

    auto f = P.to_series_poly();
    CHECK(f.size() == 5);
    CHECK(!(f[1] - t).is_nonzero());
    CHECK(!(f[2] - t).is_nonzero());
    CHECK(f[3].is_exact_zero());
    CHECK(f[4].val().v == Rat(0));

    // additivity of evaluation
    LSeries x = tpow(cx, {1, 2});
    LSeries y = tpow(cx, {3});
    CHECK(!(P.eval(x + y) - (P.eval(x) + P.eval(y))).is_nonzero());

    // companion round trip
    auto M = companion_from_addpoly(P);
    CHECK(M.size() == 2);
    auto Q = addpoly_from_companion(M);
    for (int i = 0; i < 2; ++i)
        CHECK(!(Q.a[static_cast<size_t>(i)] - P.a[static_cast<size_t>(i)]).is_nonzero());

    CHECK_THROWS_AS(AdditivePoly(cx, {}), input_error);
    auto cx3 = ctx_p(3);
    CHECK_THROWS_AS(AdditivePoly(cx, {t, uni(cx3)}), input_error);
}

TEST_CASE("separability defects and their precision demands") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    LSeries one = LSeries::one(cx);

    AdditivePoly Pu(cx, {t, one});  // X^4 + X^2 + t X
    CHECK(Pu.generic_i0() == 0);
    CHECK(Pu.special_i0() == 1);

    AdditivePoly Pi(cx, {LSeries::zero(cx), t});  // X^4 + t X^2
    CHECK(Pi.generic_i0() == 1);
    CHECK(Pi.special_i0() == 2);

    AdditivePoly Pz(cx, {LSeries::zero(cx), LSeries::zero(cx)});  // X^4
    CHECK(Pz.generic_i0() == 2);
    CHECK_THROWS_AS(tame_roots(Pz), input_error);

    AdditivePoly Pztp(cx, {LSeries::zero_to_prec(cx, 5), one});
    CHECK_THROWS_AS(Pztp.generic_i0(), precision_error);
    CHECK(Pztp.special_i0() == 1);  // a_1 known to vanish at order 0, a_2 a unit

    AdditivePoly Pblind(cx, {LSeries::zero_to_prec(cx, 0), one});
    CHECK_THROWS_AS(Pblind.special_i0(), precision_error);

    AdditivePoly Plaurent(cx, {t.shifted(-2), one});
    CHECK_THROWS_AS(Plaurent.special_i0(), input_error);
}

TEST_CASE("tame roots of the split-unit quartic over F2") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t, t});  // X^4 + t X^2 + t X

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 4);
    CHECK(R.dim == 2);
    CHECK(R.i0 == 0);
    CHECK(R.multiplicity == 1);
    CHECK(R.rel_e == 3);
    CHECK(R.ctx.e == 3);
    CHECK(R.ctx.k.q() == 4);
    CHECK(R.zeta.mult_order() == 3);

    CHECK(!R.roots[0].is_nonzero());
    std::set<long long> leads;
    for (size_t i = 1; i < 4; ++i) {
        CHECK(R.roots[i].val().v == Rat(1) / Rat(3));
        leads.insert(R.roots[i].coeff(R.roots[i].ord()).value());
    }
    CHECK(leads == std::set<long long>{1, 2, 3});  // all of F4*

    // additively closed
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j)
            CHECK(some_root_agrees(R, R.roots[i] + R.roots[j]));

    // roots kill the polynomial in the enlarged context
    AdditivePoly Pe(R.ctx, {t.extended(R.ctx), t.extended(R.ctx)});
    for (const auto& r : R.roots) CHECK(!Pe.eval(r).is_nonzero());
}

TEST_CASE("theta generator of the split-unit quartic and its Cartan class") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    auto R = tame_roots(AdditivePoly(cx, {t, t}));
    auto G = tame_generator_matrix(R);

    CHECK(G.order == 3);
    CHECK(G.rel_e == 3);
    CHECK(G.mat.size() == 2);

    auto C = cartan_check(G.mat);
    CHECK(C.contained);
    CHECK(C.generates);
    CHECK(C.order == 3);
    CHECK(C.min_poly == std::vector<int>{1, 1, 1});  // x^2 + x + 1

    // theta acts freely on the nonzero roots
    for (const auto& r : R.roots)
        if (r.is_nonzero()) CHECK(!ls_agree(theta_apply(r, R.zeta), r, 8));
}

TEST_CASE("tame roots in odd characteristic: X^3 + tX over F3") {
    auto cx = ctx_p(3);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t});

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 3);
    CHECK(R.dim == 1);
    CHECK(R.rel_e == 2);
    CHECK(R.ctx.k.deg() == 2);  // F9 for the residue kernel
    CHECK(R.zeta.mult_order() == 2);

    for (size_t i = 1; i < 3; ++i) {
        CHECK(R.roots[i].val().v == Rat(1) / Rat(2));
        // gamma * u with S(gamma) = 0: a single-term root killing the polynomial
        CHECK(R.roots[i].is_nonzero());
        CHECK(R.roots[i].terms().size() == 1);
        AdditivePoly Pe(R.ctx, {t.extended(R.ctx)});
        CHECK(!Pe.eval(R.roots[i]).is_nonzero());
    }

    auto G = tame_generator_matrix(R);
    CHECK(G.order == 2);
    CHECK(G.mat.at(0, 0).value() == 2);  // multiplication by -1 on the F3-line

    auto C = cartan_check(G.mat);
    CHECK(C.contained);
    CHECK(C.generates);  // order 2 = p - 1
}

TEST_CASE("unramified residue growth: single integral slope needing F8") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t.shifted(2), t.shifted(1)});  // X^4 + t^2 X^2 + t^3 X

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 4);
    CHECK(R.dim == 2);
    CHECK(R.rel_e == 1);         // no ramification at all
    CHECK(R.ctx.e == 1);
    CHECK(R.ctx.k.deg() == 3);   // residue kernel Y^4 + Y^2 + Y splits over F8
    CHECK(R.zeta.is_one());

    for (size_t i = 1; i < 4; ++i) CHECK(R.roots[i].val().v == Rat(1));

    auto G = tame_generator_matrix(R);
    CHECK(G.order == 1);  // theta is trivial on an unramified extension

    auto C = cartan_check(G.mat);
    CHECK(!C.contained);  // identity spans F_p only
    CHECK(C.order == 1);
}

TEST_CASE("rational roots stay in the base field: X^2 + tX") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    auto R = tame_roots(AdditivePoly(cx, {t}));

    CHECK(R.roots.size() == 2);
    CHECK(R.rel_e == 1);
    CHECK(R.ctx.k.deg() == 1);
    CHECK(!R.roots[0].is_nonzero());
    CHECK(R.roots[1].is_nonzero());
    auto ts = R.roots[1].terms();
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].first == 1);
    CHECK(ts[0].second.is_one());

    auto G = tame_generator_matrix(R);
    CHECK(G.order == 1);
    auto C = cartan_check(G.mat);
    CHECK(C.contained);   // 1x1 identity spans F_2
    CHECK(C.generates);   // F_2* is trivial
}

TEST_CASE("order-seven Cartan generator from the octic") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t, t, t});  // X^8 + t X^4 + t X^2 + t X

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 8);
    CHECK(R.dim == 3);
    CHECK(R.rel_e == 7);
    CHECK(R.ctx.e == 7);
    CHECK(R.ctx.k.deg() == 3);  // F8 carries the 7th roots of unity
    CHECK(R.zeta.mult_order() == 7);
    for (size_t i = 1; i < 8; ++i) CHECK(R.roots[i].val().v == Rat(1) / Rat(7));

    auto G = tame_generator_matrix(R);
    CHECK(G.order == 7);
    auto C = cartan_check(G.mat);
    CHECK(C.contained);
    CHECK(C.generates);  // 7 = 2^3 - 1
    CHECK(C.min_poly.size() == 4);
}

TEST_CASE("cluster peeling resolves nested branches exactly") {
    auto cx = ctx_p(2);
    LSeries A = tpow(cx, {2, 3, 4, 5, 6});
    LSeries B = tpow(cx, {4, 5, 7, 8});
    AdditivePoly P(cx, {B, A});  // X^4 + A X^2 + B X

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 4);
    CHECK(R.rel_e == 1);
    CHECK(R.ctx.k.deg() == 1);  // everything happens over F2 itself

    // known roots: 0, t^2, t + t^3, t + t^2 + t^3
    CHECK(some_root_agrees(R, LSeries::zero(R.ctx)));
    CHECK(some_root_agrees(R, tpow(R.ctx, {2})));
    CHECK(some_root_agrees(R, tpow(R.ctx, {1, 3})));
    CHECK(some_root_agrees(R, tpow(R.ctx, {1, 2, 3})));

    // canonical order: zero, then valuations ascending
    CHECK(!R.roots[0].is_nonzero());
    CHECK(R.roots[1].val().v == Rat(1));
    CHECK(R.roots[2].val().v == Rat(1));
    CHECK(R.roots[3].val().v == Rat(2));

    // polygon cross-check: valuations {1, 1, 2} plus one zero root
    auto rv = np_root_valuations(P.to_series_poly());
    CHECK(rv.zero_roots == 1);
    std::multiset<Rat> from_np, from_roots;
    for (const auto& [v, len] : rv.vals)
        for (long long i = 0; i < len; ++i) from_np.insert(v);
    for (const auto& r : R.roots)
        if (r.is_nonzero()) from_roots.insert(r.val().v);
    CHECK(from_np == from_roots);
}

TEST_CASE("inseparable layer folds to exact small roots") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {LSeries::zero(cx), t.shifted(1)});  // X^4 + t^2 X^2

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 2);
    CHECK(R.dim == 1);
    CHECK(R.i0 == 1);
    CHECK(R.multiplicity == 2);
    CHECK(R.roots[1].val().v == Rat(1));
    auto ts = R.roots[1].terms();
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].first == 1);  // the root is exactly t

    AdditivePoly Pe(R.ctx, {LSeries::zero(R.ctx), t.shifted(1).extended(R.ctx)});
    CHECK(!Pe.eval(R.roots[1]).is_nonzero());
}

TEST_CASE("inseparable layer with residue growth") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    // X^8 + t^4 X^4 + t^6 X^2: the separable core has three exact roots over F8
    AdditivePoly P(cx, {LSeries::zero(cx), t.shifted(5), t.shifted(3)});

    auto R = tame_roots(P);
    CHECK(R.roots.size() == 4);
    CHECK(R.dim == 2);
    CHECK(R.i0 == 1);
    CHECK(R.multiplicity == 2);
    CHECK(R.ctx.k.deg() == 3);
    CHECK(R.rel_e == 1);
    for (size_t i = 1; i < 4; ++i) {
        CHECK(R.roots[i].val().v == Rat(1));
        AdditivePoly Pe(R.ctx, {LSeries::zero(R.ctx), t.shifted(5).extended(R.ctx),
                                t.shifted(3).extended(R.ctx)});
        CHECK(!Pe.eval(R.roots[i]).is_nonzero());
    }
}

TEST_CASE("wild ramification is detected, not mistaken for tame") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    LSeries one = LSeries::one(cx);

    // unit coefficient above a_1: the wildness hides behind integral slopes
    AdditivePoly W1(cx, {t, one});  // X^4 + X^2 + t X
    CHECK_THROWS_AS(tame_roots(W1), wild_error);

    // wild only at the second translate level
    AdditivePoly W2(cx, {t.shifted(4), t.shifted(1)});  // X^4 + t^2 X^2 + t^5 X
    CHECK_THROWS_AS(tame_roots(W2), wild_error);

    // fractional slope of the folded polynomial
    AdditivePoly W3(cx, {LSeries::zero(cx), t});  // X^4 + t X^2, roots sqrt(t)
    CHECK_THROWS_AS(tame_roots(W3), wild_error);

    // integral valuation but inseparable exponents off the p-lattice
    AdditivePoly W4(cx, {LSeries::zero(cx), tpow(cx, {2, 3})});  // X^4 + (t^2+t^3) X^2
    CHECK_THROWS_AS(tame_roots(W4), wild_error);
}

TEST_CASE("resource bounds are honored") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t, t});

    CHECK_THROWS_AS(tame_roots(P, /*ext_bound=*/1), precision_error);
    CHECK_THROWS_AS(tame_roots(P, 8, /*budget=*/3), budget_error);
}

TEST_CASE("certificate aggregates base and translated polygons") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);

    // base polygon already shows denominator 2
    auto C1 = monodromy_certificate(AdditivePoly(cx, {t.shifted(1), t}));  // X^4+tX^2+t^2X
    CHECK(C1.zero_roots == 1);
    REQUIRE(C1.slopes.size() == 2);
    CHECK(C1.slopes[0].first == Rat(1));
    CHECK(C1.slopes[0].second == 1);
    CHECK(C1.slopes[1].first == Rat(1) / Rat(2));
    CHECK(C1.slopes[1].second == 2);
    CHECK(C1.ram_divisors == std::vector<long long>{2});
    CHECK(C1.ram_lcm == 2);
    CHECK(!C1.tame);  // denominator 2 is divisible by p

    // only a translate exposes the hidden divisor
    auto C2 = monodromy_certificate(AdditivePoly(cx, {t, LSeries::one(cx)}));  // X^4+X^2+tX
    CHECK(C2.translates_examined == 1);
    CHECK(C2.ram_divisors == std::vector<long long>{2});
    CHECK(!C2.tame);

    // fully tame: divisor 3, no translate contributions
    auto C3 = monodromy_certificate(AdditivePoly(cx, {t, t}));
    CHECK(C3.ram_divisors == std::vector<long long>{3});
    CHECK(C3.ram_lcm == 3);
    CHECK(C3.tame);
    CHECK(C3.image_order_divisors == std::vector<long long>{3});

    CHECK_THROWS_AS(
        monodromy_certificate(AdditivePoly(cx, {LSeries::zero(cx), LSeries::zero(cx)})),
        input_error);
}

TEST_CASE("certificate divisors divide the computed tame image order") {
    auto cx2 = ctx_p(2);
    auto cx3 = ctx_p(3);
    LSeries t2 = uni(cx2), t3 = uni(cx3);
    std::vector<AdditivePoly> corpus = {
        AdditivePoly(cx2, {t2, t2}),
        AdditivePoly(cx3, {t3}),
        AdditivePoly(cx2, {t2, t2, t2}),
    };
    for (const auto& P : corpus) {
        auto C = monodromy_certificate(P);
        auto G = tame_generator_matrix(tame_roots(P));
        CHECK(C.tame);
        for (long long d : C.ram_divisors) CHECK(G.order % d == 0);
    }
}

TEST_CASE("valuation-one witnesses over enlarged residue fields") {
    auto cx = ctx_p(2);
    LSeries t = uni(cx);
    AdditivePoly P(cx, {t, LSeries::one(cx)});  // X^4 + X^2 + t X

    auto W4 = nonsplit_witness(P, ff_make(2, 2));
    CHECK(W4.found);
    CHECK(W4.alpha.is_one());
    CHECK(W4.value == Rat(1));
    CHECK(W4.hasse_hypothesis_ok);
    CHECK(W4.examined == 1);

    auto W2 = nonsplit_witness(P, ff_make(2, 1));
    CHECK(W2.found);  // alpha = 1 already works over F2

    // the connected instance admits no witness anywhere
    AdditivePoly Pc(cx, {t, t});
    CHECK(!nonsplit_witness(Pc, ff_make(2, 2)).found);
    auto W16 = nonsplit_witness(Pc, ff_make(2, 4));
    CHECK(!W16.found);
    CHECK(W16.examined == 15);

    // constant part never reaches valuation one
    AdditivePoly Pl(cx, {t});
    CHECK(!nonsplit_witness(Pl, ff_make(2, 1)).found);

    CHECK_THROWS_AS(nonsplit_witness(P, ff_make(3, 1)), input_error);
    auto cx4 = ctx_p(2, 2);
    AdditivePoly P4(cx4, {uni(cx4), LSeries::one(cx4)});
    CHECK_THROWS_AS(nonsplit_witness(P4, ff_make(2, 1)), input_error);
}

TEST_CASE("tower level valuations decay by exactly 1/p") {
    auto cx2 = ctx_p(2);
    auto I2 = igusa_tower(2, uni(cx2), FFElem::one(cx2.k), 3);
    REQUIRE(I2.levels.size() == 3);
    CHECK(I2.levels[0] == Rat(1));
    CHECK(I2.levels[1] == Rat(1) / Rat(2));
    CHECK(I2.levels[2] == Rat(1) / Rat(4));
    CHECK(I2.ram_lower_bound == 4);

    auto cx3 = ctx_p(3);
    auto I3 = igusa_tower(3, uni(cx3), FFElem::one(cx3.k), 2);
    REQUIRE(I3.levels.size() == 2);
    CHECK(I3.levels[0] == Rat(1) / Rat(2));
    CHECK(I3.levels[1] == Rat(1) / Rat(6));
    CHECK(I3.ram_lower_bound == 6);

    auto cx5 = ctx_p(5);
    auto I5 = igusa_tower(5, uni(cx5), FFElem::one(cx5.k), 1);
    REQUIRE(I5.levels.size() == 1);
    CHECK(I5.levels[0] == Rat(1) / Rat(4));
    CHECK(I5.ram_lower_bound == 4);

    auto I34 = igusa_tower(3, uni(cx3), FFElem::one(cx3.k), 4);
    for (size_t i = 1; i < 4; ++i) CHECK(I34.levels[i] == I34.levels[i - 1] / Rat(3));

    CHECK_THROWS_AS(igusa_tower(2, uni(cx2), FFElem::one(cx2.k), 0), input_error);
    CHECK_THROWS_AS(igusa_tower(2, uni(cx2), FFElem::zero(cx2.k), 2), input_error);
    CHECK_THROWS_AS(igusa_tower(2, uni(cx2).shifted(1), FFElem::one(cx2.k), 2), input_error);
    CHECK_THROWS_AS(igusa_tower(3, uni(cx2), FFElem::one(cx2.k), 2), input_error);
}

TEST_CASE("theta substitution fixes coefficients and scales by exponent") {
    auto cx = ctx_p(2, 2, 3);  // F4, e = 3
    FFElem g = ff_primitive(cx.k);
    LSeries x = LSeries::from_terms(cx, {{1, FFElem::one(cx.k)}, {3, g}, {4, g}});
    LSeries y = theta_apply(x, g);  // zeta = g of order 3
    CHECK(y.coeff(1) == g);               // zeta^1
    CHECK(y.coeff(3) == g);               // zeta^3 = 1 fixes the t-coefficient
    CHECK((y.coeff(4) == g * g.pow(4)));  // zeta^4 = zeta
    CHECK(y.known_end() == x.known_end());
}
