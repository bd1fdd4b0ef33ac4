#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>

#include "toroidal/elliptic.hpp"
#include "toroidal/gamma.hpp"
#include "toroidal/params.hpp"
#include "toroidal/qfunc.hpp"
#include "toroidal/series.hpp"

using namespace toroidal;
using std::abs;

static Params P1 = default_params(1);

TEST_CASE("parameter invariants") {
    for (int M : {-3, -1, 0, 1, 2, 3}) {
        auto p = default_params(M);
        CHECK(abs(p.q1 * p.q2 * p.q3 - 1.0) < 1e-12);
        CHECK(abs(p.log_q1 + p.log_q2 + p.log_q3) == 0.0);
        CHECK(abs(p.qc1 - 1.0 / p.q1) < 1e-12);
        CHECK(abs(p.qc2 - p.q2 * Params::ipow(p.q1, 1 - M)) < 1e-12);
        CHECK(abs(p.qc3 - p.q3 * Params::ipow(p.q1, M + 1)) < 1e-12);
        CHECK(abs(p.beta + p.beta_check - double(M + 1)) < 1e-13);
        CHECK(abs(p.qc1 * p.qc2 * p.qc3 - 1.0) < 1e-12);
        // s1^N tie between levels: s2 = s1^{M-1} sc2
        CHECK(abs(p.s2 - p.s1_pow(cplx(M - 1)) * p.sc2) < 1e-12);
    }
}

TEST_CASE("genericity rejection") {
    // q2 = q1^{-2} violates genericity at (a,b) = (2,1)
    cplx q1(0.58, 0.11);
    CHECK_THROWS(Params::make(std::log(q1), -2.0 * std::log(q1), 1, 1e-11));
}

TEST_CASE("mirrored and m_negated contexts") {
    auto p = default_params(2);
    auto m = p.mirrored();
    CHECK(abs(m.q1 - p.qc1) < 1e-15);
    CHECK(abs(m.qc2 - p.q2) < 1e-15);
    CHECK(abs(m.beta - p.beta_check) < 1e-15);
    auto n = p.m_negated();
    CHECK(n.M == -2);
    CHECK(abs(n.q2 - p.q3) < 1e-13);
    CHECK(abs(n.q3 - p.q2) < 1e-13);
}

TEST_CASE("qpoch basics and reflection") {
    auto& p = P1;
    cplx x(0.3, 0.2), q = p.q1;
    CHECK(abs(qpoch(x, q, 0, 1e-12) - 1.0) < 1e-15);
    CHECK(abs(qpoch(x, q, 1, 1e-12) - (1.0 - x)) < 1e-15);
    CHECK(abs(qpoch(x, q, 3, 1e-12) - (1.0 - x) * (1.0 - q * x) * (1.0 - q * q * x)) < 1e-14);
    // (x;q)_n = (x;q)_inf / (q^n x;q)_inf for n in [-3..3]
    for (int n = -3; n <= 3; ++n) {
        cplx lhs = qpoch(x, q, n, 1e-12);
        cplx rhs = qpoch_inf(x, q, 1e-12) / qpoch_inf(Params::ipow(q, n) * x, q, 1e-12);
        CHECK(abs(lhs - rhs) < 1e-12);
    }
    // direct product oracle for the infinite symbol
    cplx acc(1.0), t = x;
    for (int k = 0; k < 200; ++k) { acc *= (1.0 - t); t *= q; }
    CHECK(abs(qpoch_inf(x, q, 1e-12) - acc) < 1e-12);
}

TEST_CASE("theta quasi-periodicity and bracket") {
    auto& p = P1;
    cplx x(0.4, -0.3), q = p.q1;
    // theta(q x) = -x^{-1} theta(x)
    CHECK(abs(theta_q(q * x, q, 1e-12) + theta_q(x, q, 1e-12) / x) < 1e-11);
    // theta(1/x)... use the standard inversion theta(q/x) = theta(x)
    CHECK(abs(theta_q(q / x, q, 1e-12) - theta_q(x, q, 1e-12)) < 1e-11);
    cplx u(0.37, 0.21);
    cplx b0 = theta_bracket(p, u);
    CHECK(abs(theta_bracket(p, u + 1.0) + b0) < 1e-11);
    CHECK(abs(theta_bracket(p, -u) + b0) < 1e-11);
    CHECK(abs(theta_bracket(p, cplx(0.0)))  < 1e-12);
    CHECK(abs(theta_bracket(p, cplx(1.0)))  < 1e-12);
}

TEST_CASE("series ring operations") {
    std::mt19937 rng(11);
    auto rnd = [&] { return cplx(std::uniform_real_distribution<>(-1, 1)(rng),
                                 std::uniform_real_distribution<>(-1, 1)(rng)); };
    Series a(cplx(0), -2, 4), b(cplx(0), 0, 5), c(cplx(0), -1, 3);
    for (auto* s : {&a, &b, &c})
        for (auto& v : s->c) v = rnd();
    auto d1 = (a + c) * b;
    auto d2 = a * b + c * b;
    CHECK(d1.max_abs_diff(d2) < 1e-13);
    // inverse
    auto ai = a.inverse();
    auto one = a * ai;
    CHECK(abs(one.coeff(0) - 1.0) < 1e-12);
    for (int k = 1; k <= one.hi; ++k) CHECK(abs(one.coeff(k)) < 1e-12);
    // exp(log(1-cx)) == 1 - cx
    cplx cc(0.4, 0.1);
    Series lg(cplx(0), 1, 8);
    cplx t = cc;
    for (int k = 1; k <= 8; ++k) { lg.at(k) = -t / double(k); t *= cc; }
    auto ex = lg.exp_series();
    CHECK(abs(ex.coeff(0) - 1.0) < 1e-13);
    CHECK(abs(ex.coeff(1) + cc) < 1e-13);
    for (int k = 2; k <= 8; ++k) CHECK(abs(ex.coeff(k)) < 1e-12);
}

TEST_CASE("expand_rational against series division oracle") {
    auto& p = P1;
    auto om = omega_ratio(p.q2, p.q3);
    auto s0 = expand_rational(om, At::Zero, 10);
    CHECK(abs(s0.coeff(0) - 1.0) < 1e-14);
    CHECK(abs(s0.coeff(1) - (1.0 - p.q2) * (1.0 - p.q3)) < 1e-13);
    // oracle: series division num/den
    Series num(cplx(0), 0, 10), den(cplx(0), 0, 10);
    num.at(0) = 1; num.at(1) = -(p.q2 + p.q3); num.at(2) = p.q2 * p.q3;
    den.at(0) = 1; den.at(1) = -(1.0 + p.q2 * p.q3); den.at(2) = p.q2 * p.q3;
    auto oracle = num * den.inverse();
    CHECK(s0.max_abs_diff(oracle) < 1e-12);
    // balance: omega(0) * omega(inf) = 1
    CHECK(om.balanced(1e-12));
    // expansion at infinity: compare numeric evaluation at a large point
    auto si = expand_rational(om, At::Infinity, 40);
    cplx x(9.0, 3.0), y = 1.0 / x;
    cplx direct = om.eval(x);
    cplx acc(0), yp(1);
    for (int k = 0; k < si.lo; ++k) yp *= y;
    for (int k = si.lo; k <= si.hi; ++k) { acc += si.coeff(k) * yp; yp *= y; }
    CHECK(abs(direct - acc) < 1e-10);
}

TEST_CASE("gamma pairs: degrees, balance, mirror") {
    for (int M : {-3, -2, -1, 0, 1, 2, 3}) {
        auto p = default_params(M);
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j) {
                CHECK(gamma_balanced(p, Half::whole(i), Half::whole(j), 1e-9));
                auto f = gamma_pair(p, Half::whole(i), Half::whole(j));
                auto b = gamma_pair(p, Half::whole(j), Half::whole(i));
                CHECK(f.degree == b.degree);
                if (i == j) CHECK(f.degree == std::abs(M));
            }
    }
    // M = 0: coefficients are q2<->q3 symmetric, so the mirror branch agrees
    // with the direct formula evaluated in swapped parameters.
    auto p0 = default_params(0);
    auto psw = Params::make(p0.log_q1, p0.log_q3, 0, 1e-11);
    for (int d = 1; d <= 3; ++d) {
        auto a = gamma_pair(p0, Half::whole(0), Half::whole(d));
        auto b = gamma_pair(psw, Half::whole(0), Half::whole(d));
        cplx x(0.3, 0.7);
        CHECK(abs(a.eval(cplx(1), x) - b.eval(cplx(1), x)) < 1e-12);
        auto ar = gamma_pair(p0, Half::whole(d), Half::whole(0));
        auto br = gamma_pair(psw, Half::whole(d), Half::whole(0));
        CHECK(abs(ar.eval(cplx(1), x) - br.eval(cplx(1), x)) < 1e-12);
    }
    // half-integer labels with integer difference are accepted
    auto g = gamma_pair(P1, Half(1), Half(3));
    CHECK(g.degree == 0);
    CHECK_THROWS(gamma_pair(P1, Half(1), Half(2)));
}

TEST_CASE("elliptic R basics") {
    auto& p = P1;
    cplx beta = p.beta, P(0.63, 0.11);
    auto R0 = elliptic_R(p, cplx(0.0), beta, P);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(abs(R0[i][j] - (i == j ? 1.0 : 0.0)) < 1e-10);
    // dynamical weight is invariant under u -> u+1 (both brackets flip sign)
    cplx u(0.4, 0.3);
    CHECK(abs(dynamical_weight(p, u + 1.0, beta, P) - dynamical_weight(p, u, beta, P)) < 1e-10);
}
