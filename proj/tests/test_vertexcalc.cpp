// Standard modules against the defining relations, plus the closed
// contraction formulas and the ladder-current identities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "toroidal/currents.hpp"

using namespace toroidal;
using std::complex;

static Params P3() {
    static Params p = default_params(3);
    return p;
}

static Space one_factor(Params const& p, int color, bool checked, cplx lambda0,
                        int D) {
    Space sp;
    sp.par = &p;
    FockFactor f;
    f.color = color;
    f.checked = checked;
    f.lambda0 = lambda0;
    sp.factors = {f};
    sp.D = D;
    sp.num_sectors = 0;
    sp.W = 0;
    sp.build();
    return sp;
}

// zero-moded color-2 factor living in a sector ladder
static Space phi_factor(Params const& p, bool checked, cplx lambda0, int D, int W) {
    Space sp;
    sp.par = &p;
    FockFactor f;
    f.color = 2;
    f.checked = checked;
    f.lambda0 = lambda0;
    f.sector = 0;
    f.lambda_step = checked ? p.beta_check : p.beta;
    f.zero_modes = true;
    sp.factors = {f};
    sp.D = D;
    sp.num_sectors = 1;
    sp.W = W;
    sp.build();
    return sp;
}

static void check_report(E1Report const& rep, double tol) {
    for (auto& [name, r] : rep) {
        INFO("family ", name, " residual ", r.residual, " clean ", r.clean);
        CHECK(r.clean > 0);
        CHECK(r.residual < tol);
    }
}

TEST_CASE("vector module satisfies every defining relation exactly") {
    Params p = P3();
    Space sp;
    cplx log_v = cplx(0.21, 0.13);
    Space vsp;
    E1Module W = make_vector_e1(vsp, p, log_v, 6, 6);
    (void)sp;
    E1Report rep = verify_e1(W, 2, 1);
    check_report(rep, 1e-12);
}

TEST_CASE("colored Fock modules satisfy the defining relations") {
    Params p = P3();
    for (int color : {1, 2, 3}) {
        Space sp = one_factor(p, color, false, cplx(0.37, 0.11), 4);
        E1Module W = make_fock_e1(sp, 0);
        INFO("color ", color);
        check_report(verify_e1(W, 2, 1), 1e-10);
    }
    // checked parameter family, color 2
    Space sp = one_factor(p, 2, true, cplx(-0.23, 0.31), 4);
    E1Module W = make_fock_e1(sp, 0);
    check_report(verify_e1(W, 2, 1), 1e-10);
}

TEST_CASE("coproduct module satisfies the defining relations") {
    Params p = P3();
    Space sp;
    sp.par = &p;
    FockFactor f;
    f.color = 2;
    f.lambda0 = cplx(0.41, 0.07);
    FockFactor g = f;
    g.lambda0 = cplx(-0.19, 0.23);
    sp.factors = {f, g};
    sp.D = 3;
    sp.build();
    E1Module W = make_coproduct_e1(sp, 0, 1);
    CHECK(std::abs(W.C - p.s2 * p.s2) < 1e-14);
    check_report(verify_e1(W, 2, 1), 1e-9);
}

// series of (a x; q)_inf / (b x; q)_inf, the independent route
static Series poch_ratio_series(cplx a, cplx b, cplx q, int order) {
    Series lg(cplx(0), 1, order);
    for (int r = 1; r <= order; ++r)
        lg.at(r) = -(Params::ipow(a, r) - Params::ipow(b, r)) /
                   (double(r) * (cplx(1) - Params::ipow(q, r)));
    return lg.exp_series();
}

TEST_CASE("intertwiner contraction kernels match the closed q-products") {
    Params p = P3();
    int ord = 12;
    Space sp = phi_factor(p, false, cplx(0.29, 0.17), 3, 2);
    Space spc = phi_factor(p, true, cplx(0.11, -0.21), 3, 2);

    VertexOp Phi = fock_current(sp, 0, Cur::Phi);
    VertexOp PhiS = fock_current(sp, 0, Cur::PhiStar);
    VertexOp PhiC = fock_current(spc, 0, Cur::Phi);
    VertexOp PhiCS = fock_current(spc, 0, Cur::PhiStar);

    cplx sA = p.q1 * p.q3, sB = p.q1;            // <Phi Phi>
    cplx tA = p.s1 / p.s3, tB = p.s1 * p.s3;     // <Phi* Phi> and <Phi Phi*>
    cplx uA = cplx(1), uB = cplx(1) / p.q3;      // <Phi* Phi*>

    auto cmp = [&](VertexOp const& A, VertexOp const& B, cplx ca, cplx cb) {
        Series lhs = vo_pairing(A, B).expand(ord);
        Series rhs = poch_ratio_series(ca, cb, p.q1, ord);
        double sc = 1;
        for (int k = 0; k <= ord; ++k) sc = std::max(sc, std::abs(rhs.coeff(k)));
        CHECK(lhs.max_abs_diff(rhs) < 1e-10 * sc);
    };
    cmp(Phi, Phi, sA, sB);
    cmp(PhiS, Phi, tA, tB);
    cmp(Phi, PhiS, tA, tB);
    cmp(PhiS, PhiS, uA, uB);

    // checked family: same base q1, exponent beta_check
    cplx q1b = std::exp(p.beta_check * p.log_q1); // q1^{beta_check} = qc3
    CHECK(std::abs(q1b - p.qc3) < 1e-12);
    cplx th = std::exp((cplx(1) + p.beta_check) / 2.0 * p.log_q1);
    cplx tl = std::exp((cplx(1) - p.beta_check) / 2.0 * p.log_q1);
    cmp(PhiC, PhiC, cplx(1), q1b);
    cmp(PhiCS, PhiCS, p.q1 / q1b, p.q1);
    cmp(PhiCS, PhiC, th, tl);
    cmp(PhiC, PhiCS, th, tl);

    // exchange kernel: R(x) = theta(a x)/theta(b x) * R(1/x) at sample points,
    // with R the two-sided ratio of infinite products (a b = q1)
    CHECK(std::abs(tA * tB - p.q1) < 1e-13);
    for (int j = 0; j < 20; ++j) {
        cplx x = std::polar(0.8 + 0.02 * j, 0.31 * j + 0.1);
        auto R = [&](cplx y) {
            return qpoch_inf(tA * y, p.q1, 1e-14) / qpoch_inf(tB * y, p.q1, 1e-14);
        };
        cplx lhs = R(x);
        cplx rhs = theta_q(tA * x, p.q1, 1e-14) / theta_q(tB * x, p.q1, 1e-14) *
                   R(cplx(1) / x);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
        // and the engine kernel agrees with R inside the disk
        if (std::abs(x) < 1.0) {
            auto v = vo_pairing(PhiS, Phi).eval(x);
            CHECK(v.order == 0);
            CHECK(std::abs(v.value - R(x)) < 1e-9 * std::abs(R(x)));
        }
    }
}

static MatCurrent mat_of(VertexOp const& v) {
    MatCurrent m = materialize(v);
    m.integerize();
    return m;
}

TEST_CASE("intertwiner pair products reproduce the ladder currents") {
    Params p = P3();
    double tol = 1e-14;
    cplx A = std::exp(-p.beta / 2.0 * (p.log_q2 / 2.0)) *
             qpoch_inf(p.q1, p.q1, tol) / qpoch_inf(cplx(1) / p.q2, p.q1, tol);
    cplx Ac = std::exp(p.beta_check / 2.0 * (p.log_qc2 / 2.0)) *
              qpoch_inf(p.q1, p.q1, tol) / qpoch_inf(p.qc2, p.q1, tol);

    Space sp = phi_factor(p, false, cplx(0.29, 0.17), 4, 2);
    Space spc = phi_factor(p, true, cplx(0.11, -0.21), 4, 2);
    cplx ls2 = p.log_q2 / 2.0, lsc2 = p.log_qc2 / 2.0;

    for (int r = 0; r <= 2; ++r) {
        // Phi(s2 z) Phi*(q1^r z) = A k_r^+(z)
        VertexOp lhs = vo_product(vo_scale_arg(fock_current(sp, 0, Cur::Phi), ls2),
                                  vo_scale_arg(fock_current(sp, 0, Cur::PhiStar),
                                               double(r) * p.log_q1));
        MatCurrent R = mat_of(k_current(sp, 0, r, +1));
        R *= A;
        MatCurrent L = mat_of(lhs);
        RelRes rr = compare_currents(L, R);
        double sc = std::max({1.0, L.max_abs(), R.max_abs()});
        INFO("k+ r=", r, " residual ", rr.residual / sc);
        CHECK(rr.clean > 0);
        CHECK(rr.residual < 1e-9 * sc);

        // Phi*(s2 z) Phi(q1^r z) = A k_r^-(z)
        VertexOp lhsm = vo_product(vo_scale_arg(fock_current(sp, 0, Cur::PhiStar), ls2),
                                   vo_scale_arg(fock_current(sp, 0, Cur::Phi),
                                                double(r) * p.log_q1));
        MatCurrent Rm = mat_of(k_current(sp, 0, r, -1));
        Rm *= A;
        MatCurrent Lm = mat_of(lhsm);
        RelRes rm = compare_currents(Lm, Rm);
        double scm = std::max({1.0, Lm.max_abs(), Rm.max_abs()});
        INFO("k- r=", r, " residual ", rm.residual / scm);
        CHECK(rm.clean > 0);
        CHECK(rm.residual < 1e-9 * scm);

        // checked family: Phi(q1c^r z) Phi*(s2c z) = Ac k_r^- (z) and mirror
        VertexOp clm = vo_product(vo_scale_arg(fock_current(spc, 0, Cur::Phi),
                                               double(r) * p.log_qc1),
                                  vo_scale_arg(fock_current(spc, 0, Cur::PhiStar), lsc2));
        MatCurrent Rc = mat_of(k_current(spc, 0, r, -1));
        Rc *= Ac;
        MatCurrent Lc = mat_of(clm);
        RelRes rc = compare_currents(Lc, Rc);
        double scc = std::max({1.0, Lc.max_abs(), Rc.max_abs()});
        INFO("checked k- r=", r, " residual ", rc.residual / scc);
        CHECK(rc.clean > 0);
        CHECK(rc.residual < 1e-9 * scc);

        VertexOp clp = vo_product(vo_scale_arg(fock_current(spc, 0, Cur::PhiStar),
                                               double(r) * p.log_qc1),
                                  vo_scale_arg(fock_current(spc, 0, Cur::Phi), lsc2));
        MatCurrent Rcp = mat_of(k_current(spc, 0, r, +1));
        Rcp *= Ac;
        MatCurrent Lcp = mat_of(clp);
        RelRes rcp = compare_currents(Lcp, Rcp);
        double sccp = std::max({1.0, Lcp.max_abs(), Rcp.max_abs()});
        INFO("checked k+ r=", r, " residual ", rcp.residual / sccp);
        CHECK(rcp.clean > 0);
        CHECK(rcp.residual < 1e-9 * sccp);
    }
}

TEST_CASE("ladder currents collapse on the auxiliary color") {
    Params p = P3();
    Space sp = one_factor(p, 1, false, cplx(0.33, 0.21), 4);

    // e^{(2)} and f^{(2)} vanish identically
    CHECK(fused_e(sp, 0, 2).vanished);
    CHECK(fused_f(sp, 0, 2).vanished);

    // k_0^{+-}(s1 z) + k_1^{-+}(z) = 0
    cplx ls1 = p.log_q1 / 2.0;
    for (int sgn : {+1, -1}) {
        MatCurrent L = mat_of(vo_scale_arg(fock_current(sp, 0, sgn > 0 ? Cur::K0P : Cur::K0M), ls1));
        MatCurrent R = mat_of(k_current(sp, 0, 1, -sgn));
        R *= cplx(-1);
        RelRes rr = compare_currents(L, R);
        INFO("sign ", sgn, " residual ", rr.residual);
        CHECK(rr.clean > 0);
        CHECK(rr.residual < 1e-10);
    }
}

// pairwise fused product of current sums, dropping vanished terms
static VOCurrent voc_mul(VOCurrent const& A, VOCurrent const& B) {
    VOCurrent r;
    for (auto& a : A.terms)
        for (auto& b : B.terms) {
            VertexOp t = vo_product(a, b);
            if (!t.vanished) r += t;
        }
    return r;
}
static VOCurrent voc_scale_arg(VOCurrent A, cplx lc) {
    VOCurrent r;
    for (auto& t : A.terms) r += vo_scale_arg(t, lc);
    return r;
}
static VOCurrent voc_scale(VOCurrent A, cplx c) {
    VOCurrent r;
    for (auto& t : A.terms) { t.scale_pref(c); r += t; }
    return r;
}

TEST_CASE("coproduct of ladder currents matches the term-by-term expansion") {
    Params p = P3();
    Space sp;
    sp.par = &p;
    FockFactor f;
    f.color = 2;
    f.lambda0 = cplx(0.41, 0.07);
    FockFactor g = f;
    g.lambda0 = cplx(-0.19, 0.23);
    sp.factors = {f, g};
    sp.D = 3;
    sp.build();

    cplx C1 = sp.factor_level(0), C2 = sp.factor_level(1);
    cplx lC1 = std::log(C1), lC2 = std::log(C2);
    Fam F = factor_family(sp, 0);
    cplx c1 = F.c(1);

    VOCurrent De, Df;
    De += fock_current(sp, 0, Cur::E);
    De += vo_product(fock_current(sp, 0, Cur::PsiM),
                     vo_scale_arg(fock_current(sp, 1, Cur::E), lC1));
    Df += vo_product(vo_scale_arg(fock_current(sp, 0, Cur::F), lC2),
                     fock_current(sp, 1, Cur::PsiP));
    Df += fock_current(sp, 1, Cur::F);

    VOCurrent Dk0p, Dk0m;
    Dk0p += vo_product(vo_scale_arg(fock_current(sp, 0, Cur::K0P), lC2),
                       fock_current(sp, 1, Cur::K0P));
    Dk0m += vo_product(fock_current(sp, 0, Cur::K0M),
                       vo_scale_arg(fock_current(sp, 1, Cur::K0M), lC1));

    for (int r = 0; r <= 2; ++r) {
        // Delta applied to k_r^+ = f^{(r)} k_0^+
        VOCurrent fr;
        if (r == 0) fr = Dk0p;
        else {
            fr = voc_scale_arg(Df, double(r - 1) * p.log_q1);
            for (int j = r - 2; j >= 0; --j)
                fr = voc_mul(fr, voc_scale_arg(Df, double(j) * p.log_q1));
            fr = voc_scale(fr, Params::ipow(-c1, r));
            fr = voc_mul(fr, Dk0p);
        }
        MatCurrent L = fr.materialize_int();
        MatCurrent R;
        R.sp = &sp;
        for (int r1 = 0; r1 <= r; ++r1) {
            int r2 = r - r1;
            VertexOp t = vo_product(
                vo_scale_arg(k_current(sp, 0, r1, +1), lC2),
                vo_scale_arg(k_current(sp, 1, r2, +1), double(r1) * p.log_q1));
            if (!t.vanished) R += mat_of(t);
        }
        RelRes rr = compare_currents(L, R);
        double sc = std::max({1.0, L.max_abs(), R.max_abs()});
        INFO("Delta k+ r=", r, " residual ", rr.residual / sc);
        CHECK(rr.clean > 0);
        CHECK(rr.residual < 1e-9 * sc);

        // Delta applied to k_r^- = k_0^- e^{(r)}
        VOCurrent er;
        if (r == 0) er = Dk0m;
        else {
            er = De;
            for (int j = 1; j < r; ++j)
                er = voc_mul(er, voc_scale_arg(De, double(j) * p.log_q1));
            er = voc_scale(er, Params::ipow(c1, r));
            er = voc_mul(Dk0m, er);
        }
        MatCurrent Lm = er.materialize_int();
        MatCurrent Rm;
        Rm.sp = &sp;
        for (int r1 = 0; r1 <= r; ++r1) {
            int r2 = r - r1;
            VertexOp t = vo_product(
                vo_scale_arg(k_current(sp, 0, r1, -1), double(r2) * p.log_q1),
                vo_scale_arg(k_current(sp, 1, r2, -1), lC1));
            if (!t.vanished) Rm += mat_of(t);
        }
        RelRes rm = compare_currents(Lm, Rm);
        double scm = std::max({1.0, Lm.max_abs(), Rm.max_abs()});
        INFO("Delta k- r=", r, " residual ", rm.residual / scm);
        CHECK(rm.clean > 0);
        CHECK(rm.residual < 1e-9 * scm);
    }
}
