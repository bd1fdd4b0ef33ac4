#pragma once
// q-Pochhammer symbols, theta functions and the multiplicative bracket [u].

#include <climits>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "toroidal/params.hpp"
#include "toroidal/series.hpp"

namespace toroidal {

constexpr int QPOCH_INF = INT_MAX;

// (x;q)_inf, |q|<1.  Stops once the running factor is below tol*1e-2.
template <class C>
C qpoch_inf(C x, C q, typename C::value_type tol) {
    using std::abs;
    if (!(abs(q) < typename C::value_type(1)))
        throw std::runtime_error("qpoch_inf: |q| >= 1");
    C acc(1), t = x;
    typename C::value_type cut = tol * typename C::value_type(1e-2);
    for (int k = 0; k < 100000; ++k) {
        if (abs(t) < cut) break;
        acc *= (C(1) - t);
        t *= q;
    }
    return acc;
}

// (x;q)_n for n in Z u {inf}:
//   n >= 0 : prod_{j=0}^{n-1} (1 - q^j x)
//   n <  0 : 1 / prod_{j=1}^{-n} (1 - q^{-j} x)      [= (x;q)_inf/(q^n x;q)_inf]
template <class C>
C qpoch(C x, C q, int n, typename C::value_type tol) {
    if (n == QPOCH_INF) return qpoch_inf(x, q, tol);
    C acc(1);
    if (n >= 0) {
        C t = x;
        for (int j = 0; j < n; ++j) { acc *= (C(1) - t); t *= q; }
        return acc;
    }
    C qi = C(1) / q, t = qi * x;
    for (int j = 0; j < -n; ++j) { acc *= (C(1) - t); t *= qi; }
    return C(1) / acc;
}

// theta_q(x) = (x;q)_inf (q/x;q)_inf (q;q)_inf
template <class C>
C theta_q(C x, C q, typename C::value_type tol) {
    return qpoch_inf(x, q, tol) * qpoch_inf(q / x, q, tol) * qpoch_inf(q, q, tol);
}

// [u] = q1^{u(u-1)/2} theta_{q1}(q1^u).  The argument is u itself (not q1^u),
// so the branch of the quadratic exponent is unambiguous.
template <class C>
C theta_bracket(BasicParams<C> const& p, C u) {
    using std::exp;
    C qu = exp(u * p.log_q1);
    return exp(u * (u - C(1)) / typename C::value_type(2) * p.log_q1) *
           theta_q(qu, p.q1, p.tol);
}

// omega(x) = (1-q2 x)(1-q3 x) / ((1-x)(1-q2 q3 x)), as a factor ratio.
template <class C>
BasicFactorRatio<C> omega_ratio(C q2, C q3) {
    BasicFactorRatio<C> f;
    f.num = {q2, q3};
    f.den = {C(1), q2 * q3};
    return f;
}

// g(z,w) = (z-q1 w)(z-q2 w)(z-q3 w); returns coefficients of z^{3-k} w^k.
template <class C>
std::vector<C> g_poly_coeffs(C q1, C q2, C q3) {
    // prod (z - qi w) = z^3 - (e1) z^2 w + (e2) z w^2 - (e3) w^3
    C e1 = q1 + q2 + q3;
    C e2 = q1 * q2 + q1 * q3 + q2 * q3;
    C e3 = q1 * q2 * q3;
    return {C(1), -e1, e2, -e3};
}

} // namespace toroidal
