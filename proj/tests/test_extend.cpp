// Rank-one extensions of the glued module: the four gluing variants, the
// closed four-term ladder after stacking two of them, the shifted-lattice
// variant kept raw, and the superalgebra image living at M = N = 0.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "toroidal/amn.hpp"
#include "toroidal/currents.hpp"

using namespace toroidal;

static void check_report(E1Report const& rep, double tol) {
    for (auto& [name, r] : rep) {
        INFO("family ", name, " residual ", r.residual, " clean ", r.clean);
        CHECK(r.clean > 0);
        CHECK(r.residual < tol);
    }
}

static void check_rel(char const* what, RelRes const& r, double tol) {
    INFO(what, " residual ", r.residual, " clean ", r.clean);
    CHECK(r.clean > 0);
    CHECK(r.residual < tol);
}

static AmnRep one_slot(Params const& p, Space& sp, F22Options const& fo,
                       bool left, bool checked, cplx v) {
    ModuleSpec ms = extend_by_F1(p, f22_module(p, fo), left, checked, v);
    return realize(p, sp, ms, fo.W, fo.D);
}

static void relation_sweep(AmnRep const& rep, double tol) {
    check_report(verify_R1(rep, rep.xp_index(0), rep.xm_index(0), 1, 1), tol);
    check_rel("X+X+", verify_R2(rep, rep.xp_index(0), rep.xp_index(1), true, 1), tol);
    check_rel("X-X-", verify_R2(rep, rep.xm_index(0), rep.xm_index(1), false, 1), tol);
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            INFO("bracket offsets ", a, " ", b);
            check_rel("X+X-", verify_R3(rep, rep.xp_index(a), rep.xm_index(b), 1), tol);
        }
}

TEST_CASE("all four rank-one gluings keep the full relation set") {
    F22Options fo;
    fo.W = 2;
    fo.D = 3;
    for (int which = 0; which < 4; ++which) {
        bool left = which == 0 || which == 2;
        bool checked = which >= 2;
        INFO("left = ", left, " checked = ", checked);
        Params p = default_params(1);
        Space sp;
        AmnRep rep = one_slot(p, sp, fo, left, checked, cplx(0.23, 0.11));
        CHECK(rep.N == 1);
        relation_sweep(rep, 1e-8);
    }
    // lattice parity flips with each slot: N odd moves X+ to half-integers
    for (int M : {-1, 0, 2}) {
        INFO("M = ", M);
        Params p = default_params(M);
        Space sp;
        AmnRep rep = one_slot(p, sp, fo, true, false, cplx(0.19, 0.13));
        CHECK(rep.N == M);
        relation_sweep(rep, 1e-8);
    }
}

TEST_CASE("two stacked slots reproduce the closed four-term ladder") {
    Params p = default_params(-1);
    F22Options fo;
    fo.W = 2;
    fo.D = 3;
    ModuleSpec inner = f22_module(p, fo);
    ModuleSpec ms = extend_by_F1(
        p, extend_by_F1(p, inner, true, false, cplx(0.21, 0.17)), true, false,
        cplx(0.33, 0.07));
    Space sp;
    AmnRep rep = realize(p, sp, ms, fo.W, fo.D);
    REQUIRE(rep.N == 0);
    relation_sweep(rep, 1e-8);

    // view of the two original towers sitting at factor offset 2
    AmnRep in2 = inner.make(sp, 2);
    cplx lq1 = p.log_q1, ls1 = lq1 / 2.0;
    auto kf = [&](int fi, int r, cplx sh) {
        return vo_scale_arg(k_current(sp, fi, r, -1), sh);
    };
    auto term = [&](VertexOp a, VertexOp b, Half j, cplx sh) {
        return voc_mul(voc_of(vo_product_many({a, b})),
                       voc_scale_arg(in2.Xp(j), sh));
    };
    for (int i : {-1, 0, 1}) {
        Half h = Half::whole(i);
        VOCurrent direct =
            voc_add(term(kf(0, 0, 0), kf(1, 0, ls1), h - Half::whole(1), lq1),
                    term(kf(0, 0, 0), kf(1, 1, -ls1), h, 0));
        direct = voc_add(direct, term(kf(0, 1, -lq1), kf(1, 0, -ls1), h, 0));
        direct = voc_add(direct,
                         term(kf(0, 1, -lq1), kf(1, 1, -cplx(3) * ls1),
                              h + Half::whole(1), -lq1));
        RelRes r = compare_currents(direct.materialize_int(), rep.mXp(h));
        check_rel("four-term ladder", r, 1e-10);
    }
}

TEST_CASE("raw shifted-lattice gluing satisfies its half-integer identities") {
    Params p = default_params(-1);
    F22Options fo;
    fo.W = 2;
    fo.D = 3;
    ModuleSpec ms = extend_by_F1(
        p, extend_by_F1(p, f22_module(p, fo), true, false, cplx(0.27, 0.09)),
        false, false, cplx(0.15, 0.21), false);
    Space sp;
    AmnRep rep = realize(p, sp, ms, fo.W, fo.D);
    REQUIRE(rep.aminus);
    REQUIRE(rep.N == 0);

    Space const& s = *rep.sp;
    cplx q3 = p.q3, c = p.q1 * p.s2;
    Coeff zero;
    zero.sp = &s;
    for (int it = -1; it <= 0; ++it) {
        Half ih = Half::whole(it) + Half(1); // half-integer ladder labels
        MatCurrent const& E = rep.mXp(ih);
        MatCurrent const& F = rep.mXm(-ih);
        MatCurrent Kcp = voc_scale_arg(rep.kkc(0, +1), (ih.twice / 2.0) * p.log_q1)
                             .materialize_int();
        MatCurrent Kcm = voc_scale_arg(rep.kkc(0, -1), (ih.twice / 2.0) * p.log_q1)
                             .materialize_int();
        RelRes ee, ff, ef;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                // (z - q3 w) E(z) E(w) + (w - q3 z) E(w) E(z) = 0
                Coeff l = compose(E, a - 1, E, b);
                Coeff t = compose(E, a, E, b - 1);
                t *= -q3;
                l += t;
                l += compose(E, b - 1, E, a);
                t = compose(E, b, E, a - 1);
                t *= -q3;
                l += t;
                ee.absorb(compare_rel(l, zero));
                // (w - q3 z) F(z) F(w) + (z - q3 w) F(w) F(z) = 0
                l = compose(F, a, F, b - 1);
                t = compose(F, a - 1, F, b);
                t *= -q3;
                l += t;
                l += compose(F, b, F, a - 1);
                t = compose(F, b - 1, F, a);
                t *= -q3;
                l += t;
                ff.absorb(compare_rel(l, zero));
                // [E(z), F(w)] against the two diagonal delta terms
                l = compose(E, a, F, b);
                t = compose(F, b, E, a);
                t *= cplx(-1);
                l += t;
                Coeff r = conv_at(s, rep.mk(0, +1, false), Kcp, a + b);
                r *= Params::ipow(c, -a);
                t = conv_at(s, rep.mk(0, -1, false), Kcm, a + b);
                t *= -Params::ipow(c, -b);
                r += t;
                ef.absorb(compare_rel(l, r));
            }
        INFO("ladder label ", ih.twice, "/2");
        check_rel("EE", ee, 1e-9);
        check_rel("FF", ff, 1e-9);
        check_rel("EF", ef, 1e-9);
    }
}

TEST_CASE("the M = N = 0 gluing carries the two-color superalgebra") {
    Params p = default_params(0);
    F22Options fo;
    fo.W = 2;
    fo.D = 3;
    Space sp;
    AmnRep rep = one_slot(p, sp, fo, true, false, cplx(0.29, 0.13));
    REQUIRE(rep.N == 0);
    E1Report r = gl11_check(rep, 1, 1);
    CHECK(r.size() == 29); // every relation family, per index couple
    check_report(r, 1e-8);
}
