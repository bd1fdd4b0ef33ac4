#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "toroidal/fock.hpp"
#include "toroidal/vertexop.hpp"

using namespace toroidal;

static Space make_space(Params const& p, int nfac, int D, int nsec = 0, int W = 0) {
    Space sp;
    sp.par = &p;
    sp.D = D; sp.num_sectors = nsec; sp.W = W;
    for (int f = 0; f < nfac; ++f) {
        FockFactor ff;
        ff.color = 2;
        ff.lambda0 = cplx(0.31, 0.07) + 0.1 * double(f);
        ff.sector = nsec > 0 ? f % nsec : -1;
        ff.lambda_step = 1;
        sp.factors.push_back(ff);
    }
    sp.build();
    return sp;
}

TEST_CASE("slice dimensions match partition counting") {
    auto p = default_params(1);
    auto sp = make_space(p, 1, 4);
    REQUIRE(sp.slices.size() == 5);
    int expect[] = {1, 1, 2, 3, 5};
    for (int d = 0; d <= 4; ++d) {
        int sid = sp.find_slice(d, {});
        REQUIRE(sid >= 0);
        CHECK(sp.dim(sid) == expect[d]);
        CHECK(partition_count(d) == expect[d]);
        CHECK((long long)partitions_of(d).size() == expect[d]);
    }
    // two factors: convolution of partition counts
    auto sp2 = make_space(p, 2, 4);
    for (int d = 0; d <= 4; ++d) {
        long long conv = 0;
        for (int a = 0; a <= d; ++a) conv += partition_count(a) * partition_count(d - a);
        CHECK(sp2.dim(sp2.find_slice(d, {})) == conv);
    }
    CHECK(partition_count(20) == 627);
}

TEST_CASE("mode commutators reproduce the stored norms") {
    auto p = default_params(0);
    auto sp = make_space(p, 1, 5);
    for (int r = 1; r <= 3; ++r)
        for (int s = 1; s <= 3; ++s) {
            auto up = h_mode(sp, 0, -s);  // h_{-s}, key +s
            auto dn = h_mode(sp, 0, r);   // h_r, key -r
            Coeff ab = compose(dn, -r, up, s);
            Coeff ba = compose(up, s, dn, -r);
            Coeff rhs; rhs.sp = &sp;
            if (r == s) {
                auto d = diag_current(sp, [&](Slice const&) { return h_norm(sp, 0, r); });
                rhs = coeff_at(d, 0);
            }
            Coeff lhs = ab; lhs *= cplx(1);
            Coeff neg = ba; neg *= cplx(-1);
            lhs += neg;
            auto cmp = compare(lhs, rhs);
            CHECK(cmp.clean > 0);
            CHECK(cmp.residual < 1e-12);
        }
}

TEST_CASE("norm value against the direct kappa formula") {
    auto p = default_params(2);
    Space sp = make_space(p, 1, 3);
    sp.factors[0].checked = true;
    for (int r = 1; r <= 3; ++r) {
        cplx C = p.sc2;
        cplx expect = (Params::ipow(C, r) - Params::ipow(C, -r)) / (double(r) * p.kappa_check(r));
        CHECK(std::abs(h_norm(sp, 0, r) - expect) < 1e-14);
        // geometric expansion of r*norm agrees term by term
        auto rg = rg_geom(sp, 0);
        CHECK(std::abs(rg.eval(r) - double(r) * expect) < 1e-10);
    }
}

TEST_CASE("contraction kernel: series route equals closed form") {
    auto p = default_params(1);
    auto sp = make_space(p, 1, 4);
    VertexOp A = VertexOp::unit(sp), B = VertexOp::unit(sp);
    A.ca[0].push(1.0, cplx(0.4, 0.2));
    A.ca[0].push(cplx(0, -1), cplx(0.7, -0.1));
    B.cr[0].push(1.0, cplx(0.5, 0.3));
    auto phi = vo_pairing(A, B);
    // oracle: direct exponential of the pairing sum
    int N = 24;
    Series lg(cplx(0), 1, N);
    for (int r = 1; r <= N; ++r) {
        cplx P{};
        for (auto& [a, ca] : A.ca[0].t)
            for (auto& [b, cb] : B.cr[0].t)
                P += a * b * Params::ipow(ca * cb, r) * double(r) * h_norm(sp, 0, r);
        lg.at(r) = P / double(r);
    }
    Series direct = lg.exp_series();
    Series fromfac = phi.expand(N);
    CHECK(direct.max_abs_diff(fromfac) < 1e-9);
    // pointwise value agrees with the truncated series well inside the disk
    cplx x0(0.12, 0.05);
    auto v = phi.eval(x0);
    CHECK(v.order == 0);
    CHECK(std::abs(v.value - direct.eval(x0, std::log(x0))) < 1e-10);
}

// The fused product carries the full analytic contraction value, while the
// composed route only sums intermediate states inside the cutoff; at scaled
// argument A(z)B(cz) the missing tail is O(c^{D+1}), so a deep space plus a
// small |c| pins the machinery to high accuracy, and doubling the depth must
// shrink the gap.
TEST_CASE("fused product equals composed mode sums up to the depth tail") {
    auto p = default_params(1);
    cplx logc = std::log(cplx(0.07, 0.03));
    auto run = [&](int D) {
        auto sp = make_space(p, 1, D);
        VertexOp A = VertexOp::unit(sp), B = VertexOp::unit(sp);
        A.ca[0].push(cplx(0.9, 0.1), cplx(0.45, 0.15));
        A.cr[0].push(cplx(0.3, 0.1), cplx(0.5, -0.1));
        B.cr[0].push(cplx(0.8, -0.3), cplx(0.6, 0.1));
        B.cr[0].push(cplx(-0.2, 0.0), cplx(0.3, -0.2));
        B.ca[0].push(cplx(0.4, 0.2), cplx(0.35, 0.05));
        auto Bs = vo_scale_arg(B, logc);
        auto Am = materialize(A);
        auto Bm = materialize(Bs);
        auto ABm = materialize(vo_product(A, Bs));
        int vac = sp.find_slice(0, {});
        double worst = 0;
        for (int ptot = -2; ptot <= 2; ++ptot) {
            Coeff sum; sum.sp = ABm.sp;
            for (int pa = -D - 2; pa <= D + 2; ++pa)
                sum += compose(Am, pa, Bm, ptot - pa);
            auto direct = coeff_at(ABm, ptot);
            // from the vacuum nothing escapes below power D+1, so that column
            // isolates the analytic contraction from truncation effects
            auto vac_only = [&](Coeff& c) {
                for (auto it = c.m.begin(); it != c.m.end();)
                    it = (it->first.first == vac) ? ++it : c.m.erase(it);
                c.bad.clear();
            };
            vac_only(sum); vac_only(direct);
            auto cmp = compare(sum, direct);
            CHECK((cmp.clean > 0 || ptot < 0));
            worst = std::max(worst, cmp.residual);
        }
        return worst;
    };
    double r5 = run(5), r9 = run(9);
    CHECK(r5 < 1e-5);
    CHECK(r9 < 1e-9);
    CHECK(r9 < r5);
}

TEST_CASE("zero modes: [number operator, shift] and window loss") {
    auto p = default_params(0);
    auto sp = make_space(p, 1, 2, 1, 2);
    auto P = diag_current(sp, [](Slice const& s) { return cplx(double(s.n[0])); });
    auto eQ = materialize(vo_zero_shift(sp, 0, 1));
    Coeff pa = compose(P, 0, eQ, 0);
    Coeff ap = compose(eQ, 0, P, 0);
    ap *= cplx(-1);
    pa += ap; // [P, e^Q]
    auto cmp = compare(pa, coeff_at(eQ, 0));
    CHECK(cmp.clean > 0);
    CHECK(cmp.residual < 1e-13);
    // boundary sector must be flagged lost, not silently dropped
    int bad = 0;
    for (int sid = 0; sid < (int)sp.slices.size(); ++sid)
        if (eQ.lost_bound(sid) == INT_MIN) ++bad;
    CHECK(bad == 3); // n = +W slices, depths 0..2
}

TEST_CASE("sign rule gives odd-odd anticommutation") {
    auto p = default_params(0);
    Space sp;
    sp.par = &p; sp.D = 1; sp.num_sectors = 2; sp.W = 2;
    FockFactor f0; f0.color = 2; f0.sector = 0; f0.lambda_step = 1;
    FockFactor f1 = f0; f1.sector = 1;
    sp.factors = {f0, f1};
    sp.build();
    VertexOp B = vo_zero_shift(sp, 0, 1); B.parity = 1;
    VertexOp A = vo_zero_shift(sp, 1, 1); A.parity = 1;
    A.sign_rule = [](std::vector<int> const& n, State const&) {
        return ((n[0] % 2 + 2) % 2) ? -1.0 : 1.0;
    };
    auto Am = materialize(A), Bm = materialize(B);
    Coeff ab = compose(Am, 0, Bm, 0);
    Coeff ba = compose(Bm, 0, Am, 0);
    ab += ba; // anticommutator must vanish on clean blocks
    Coeff zero; zero.sp = &sp;
    auto cmp = compare(ab, zero);
    CHECK(cmp.clean > 0);
    CHECK(cmp.residual < 1e-13);
}

TEST_CASE("argument scaling and inversion behave") {
    auto p = default_params(1);
    auto sp = make_space(p, 1, 3);
    VertexOp A = VertexOp::unit(sp);
    A.cr[0].push(1.0, cplx(0.5, 0.2));
    A.alpha.cst = cplx(2, 0);
    cplx lc = std::log(cplx(0.8, 0.3));
    auto As = vo_scale_arg(A, lc);
    // X(cz) coefficient of h_{-r} gains c^r, prefactor gains c^alpha
    CHECK(std::abs(As.cr[0].eval(2) - A.cr[0].eval(2) * std::exp(2.0 * lc)) < 1e-13);
    CHECK(std::abs(As.prefactor({}) - std::exp(cplx(2, 0) * lc)) < 1e-13);
    // inverse of one-sided op composes to identity
    VertexOp Ai = vo_inverse(A);
    auto prod = vo_product(A, Ai);
    auto Pm = materialize(prod);
    auto idm = diag_current(sp, [](Slice const&) { return cplx(1); });
    auto cmp = compare(coeff_at(Pm, 0), coeff_at(idm, 0));
    CHECK(cmp.residual < 1e-12);
}
