#pragma once
// Exchange-coefficient pairs gamma_{i,j} for the quadratic relations between
// the glued currents.  gamma(i,j) is homogeneous: gamma(a,b)(first,second) =
// first^degree * ratio(second/first), with the ratio kept in factored form so
// both expansion directions and the balance property are exact operations.

#include <cmath>
#include <vector>

#include "toroidal/params.hpp"
#include "toroidal/series.hpp"

namespace toroidal {

template <class C>
struct HomogRatio {
    int degree = 0;
    BasicFactorRatio<C> ratio;

    C eval(C first, C second) const {
        return BasicParams<C>::ipow(first, degree) * ratio.eval(second / first);
    }
};

// Re-express pref x^p prod(1-n x)/prod(1-d x) in the reciprocal variable.
template <class C>
BasicFactorRatio<C> reciprocal_var(BasicFactorRatio<C> const& f) {
    using std::abs;
    BasicFactorRatio<C> g;
    g.pref = f.pref;
    g.power = -f.power;
    for (auto n : f.num) {
        if (abs(n) == typename C::value_type(0)) { g.pref *= C(1); continue; }
        g.pref *= -n; g.power -= 1; g.num.push_back(C(1) / n);
    }
    for (auto d : f.den) {
        if (abs(d) == typename C::value_type(0)) continue;
        g.pref /= -d; g.power += 1; g.den.push_back(C(1) / d);
    }
    return g;
}

namespace detail {
// (first - c * second) as a factor: first * (1 - c x), x = second/first
template <class C>
void push_linear(HomogRatio<C>& h, C c) {
    h.degree += 1;
    h.ratio.num.push_back(c);
}
// divide by (first - c * second)
template <class C>
void push_linear_den(HomogRatio<C>& h, C c) {
    h.degree -= 1;
    h.ratio.den.push_back(c);
}
} // namespace detail

// gamma_{a,b} as a function of its two arguments, valid for any order of a,b.
// Lattice indices are passed as Half (the plus-current label set may sit in
// Z+1/2); only the difference enters, and it is always an integer.
template <class C>
HomogRatio<C> gamma_pair(BasicParams<C> const& p, Half a, Half b) {
    using std::exp;
    int Ms = p.M;
    Half d2 = b - a;
    if (d2.twice % 2 != 0) throw std::runtime_error("gamma_pair: non-integer index difference");
    int diff = d2.twice / 2;

    // mirror for M <= 0: M -> -M, q2 <-> q3, qc2 <-> qc3
    bool mirror = (Ms < 0) || (Ms == 0 && false);
    int M = mirror ? -Ms : Ms;
    C q1 = p.q1;
    C q2 = mirror ? p.q3 : p.q2;
    C q3 = mirror ? p.q2 : p.q3;
    C log_q2 = mirror ? p.log_q3 : p.log_q2;
    C log_qc2 = mirror ? p.log_qc3 : p.log_qc2;
    C qc2 = mirror ? p.qc3 : p.qc2;

    HomogRatio<C> h;
    auto q1pow = [&](int n) { return BasicParams<C>::ipow(q1, n); };

    if (diff == 0) {
        for (int r = 0; r <= M - 1; ++r) detail::push_linear(h, q2 * q1pow(-r));
        return h;
    }
    if (diff > 0) {
        // forward coefficient gamma_{a,b}(z,w), a < b
        for (int r = 1; r <= diff - 1; ++r) detail::push_linear(h, q1pow(r));
        if (diff <= M)
            for (int r = 0; r <= -diff + M - 1; ++r) detail::push_linear(h, q2 * q1pow(-r));
        return h;
    }
    // backward coefficient gamma_{a,b}(w,z) with a > b
    int k = -diff; // = paper's j - i > 0
    if (k <= M) {
        h.ratio.pref = C(k % 2 == 0 ? -1 : 1) * BasicParams<C>::ipow(qc2, -k);
        for (int r = 0; r <= k + M - 1; ++r) detail::push_linear(h, q2 * q1pow(-r));
        for (int r = 0; r <= k; ++r) detail::push_linear_den(h, q1pow(-r));
        return h;
    }
    h.ratio.pref = C(M % 2 == 0 ? -1 : 1) *
                   exp(C(typename C::value_type(-M) / typename C::value_type(2)) * (log_q2 + log_qc2)) *
                   p.q1_pow(C(typename C::value_type(k) * typename C::value_type(k - 1) / typename C::value_type(2)));
    for (int r = 0; r <= k + M - 1; ++r) detail::push_linear(h, q2 * q1pow(-r));
    for (int r = 0; r <= k - M - 1; ++r) detail::push_linear(h, q3 * q1pow(-r));
    for (int r = 0; r <= k; ++r) detail::push_linear_den(h, q1pow(-r));
    return h;
}

// Balance certificate: gamma_{b,a}(w,z)/gamma_{a,b}(z,w) has finite nonzero
// limits at w/z -> 0 and w/z -> inf whose product is 1.
template <class C>
bool gamma_balanced(BasicParams<C> const& p, Half a, Half b,
                    typename C::value_type tol) {
    using std::abs;
    auto fwd = gamma_pair(p, a, b);   // function of (z, w)
    auto bwd = gamma_pair(p, b, a);   // function of (w, z)
    if (fwd.degree != bwd.degree) return false;
    // express both in x = w/z: fwd gives F1(x); bwd gives x^deg * F2(1/x)
    BasicFactorRatio<C> f = reciprocal_var(bwd.ratio);
    f.power += bwd.degree;
    // quotient f / fwd.ratio
    BasicFactorRatio<C> q = f;
    q.pref /= fwd.ratio.pref;
    q.num.insert(q.num.end(), fwd.ratio.den.begin(), fwd.ratio.den.end());
    q.den.insert(q.den.end(), fwd.ratio.num.begin(), fwd.ratio.num.end());
    q.power -= fwd.ratio.power;
    return q.balanced(tol);
}

} // namespace toroidal
