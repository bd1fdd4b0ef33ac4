#pragma once
// Truncated Laurent series in one variable with a complex global exponent
// offset: f(x) = x^alpha * sum_{k=lo..hi} c[k] x^k.  Window tracking keeps
// multiplication honest: a product coefficient is retained only when every
// contribution to it lies inside both operand windows.

#include <algorithm>
#include <cassert>
#include <complex>
#include <stdexcept>
#include <vector>

#include "toroidal/params.hpp"

namespace toroidal {

template <class C>
struct BasicSeries {
    using real = typename C::value_type;
    C alpha{};       // global offset exponent
    int lo = 0;      // window [lo, hi], inclusive; empty if hi < lo
    int hi = -1;
    std::vector<C> c;

    BasicSeries() = default;
    BasicSeries(C alpha_, int lo_, int hi_)
        : alpha(alpha_), lo(lo_), hi(hi_),
          c(hi_ >= lo_ ? hi_ - lo_ + 1 : 0) {}

    static BasicSeries constant(C v, int order) {
        BasicSeries s(C(0), 0, order);
        s.c[0] = v;
        return s;
    }

    bool empty() const { return hi < lo; }
    int size() const { return empty() ? 0 : hi - lo + 1; }

    C coeff(int k) const {
        if (k < lo || k > hi) return C(0);
        return c[k - lo];
    }
    C& at(int k) { return c.at(k - lo); }

    BasicSeries truncated(int new_hi) const {
        BasicSeries s = *this;
        if (new_hi < s.hi) { s.hi = new_hi; s.c.resize(s.size()); }
        return s;
    }

    // x^n * f
    BasicSeries shifted(int n) const {
        BasicSeries s = *this;
        s.lo += n; s.hi += n;
        return s;
    }

    BasicSeries operator*(C v) const {
        BasicSeries s = *this;
        for (auto& x : s.c) x *= v;
        return s;
    }

    BasicSeries operator+(BasicSeries const& o) const {
        using std::abs;
        if (empty()) return o;
        if (o.empty()) return *this;
        if (abs(alpha - o.alpha) > real(1e-9))
            throw std::runtime_error("series addition: offset mismatch");
        BasicSeries s(alpha, std::min(lo, o.lo), std::min(hi, o.hi));
        for (int k = s.lo; k <= s.hi; ++k) s.at(k) = coeff(k) + o.coeff(k);
        return s;
    }

    BasicSeries operator-(BasicSeries const& o) const { return *this + o * C(-1); }

    BasicSeries operator*(BasicSeries const& o) const {
        BasicSeries s;
        s.alpha = alpha + o.alpha;
        if (empty() || o.empty()) { s.lo = 0; s.hi = -1; return s; }
        s.lo = lo + o.lo;
        s.hi = std::min(hi + o.lo, lo + o.hi);
        if (s.hi < s.lo) { s.hi = s.lo - 1; return s; }
        s.c.assign(s.hi - s.lo + 1, C(0));
        for (int a = lo; a <= hi; ++a)
            for (int b = o.lo; b <= o.hi; ++b) {
                int k = a + b;
                if (k >= s.lo && k <= s.hi) s.at(k) += coeff(a) * o.coeff(b);
            }
        return s;
    }

    // multiplicative inverse; leading coefficient must be nonzero
    BasicSeries inverse() const {
        using std::abs;
        if (empty()) throw std::runtime_error("inverse of empty series");
        C lead = coeff(lo);
        if (abs(lead) == real(0)) throw std::runtime_error("inverse: zero leading coefficient");
        int n = size();
        BasicSeries s(-alpha, -lo, -lo + n - 1);
        s.c[0] = C(1) / lead;
        for (int k = 1; k < n; ++k) {
            C acc(0);
            for (int j = 0; j < k; ++j) acc += s.c[j] * coeff(lo + k - j);
            s.c[k] = -acc / lead;
        }
        return s;
    }

    // exp of a series with lo >= 1 (no constant/negative part), window kept
    BasicSeries exp_series() const {
        if (!empty() && lo < 1) throw std::runtime_error("exp_series needs lo >= 1");
        int n = empty() ? 0 : hi;
        BasicSeries s(C(0), 0, n);
        if (s.empty()) { s = BasicSeries(C(0), 0, 0); s.c[0] = C(1); return s; }
        s.c[0] = C(1);
        // f' = g' f  =>  k f_k = sum_{j) j g_j f_{k-j}
        for (int k = 1; k <= n; ++k) {
            C acc(0);
            for (int j = 1; j <= k; ++j) acc += real(j) * coeff(j) * s.c[k - j];
            s.c[k] = acc / real(k);
        }
        return s;
    }

    C eval(C x, C log_x) const {
        using std::exp;
        C acc(0), xp = C(1);
        // assumes lo >= 0 caller-side when alpha folds negative powers
        C xlo = BasicParams<C>::ipow(x, lo);
        for (int k = lo; k <= hi; ++k) { acc += coeff(k) * xlo * xp; xp *= x; }
        return exp(alpha * log_x) * acc;
    }

    real max_abs_diff(BasicSeries const& o) const {
        using std::abs;
        real m(0);
        int a = std::max(lo, o.lo), b = std::min(hi, o.hi);
        for (int k = a; k <= b; ++k) m = std::max(m, abs(coeff(k) - o.coeff(k)));
        return m;
    }
};

using Series = BasicSeries<cplx>;

// pref * x^power * prod_i (x-num... represented multiplicatively as
//   pref * x^power * prod_i (1 - n_i x) / prod_j (1 - d_j x).
// This normal form covers every rational coefficient appearing in the
// exchange relations (omega, gamma ratios, rho kernels).
template <class C>
struct BasicFactorRatio {
    C pref{1};
    int power = 0;
    std::vector<C> num, den;

    BasicFactorRatio& operator*=(BasicFactorRatio const& o) {
        pref *= o.pref; power += o.power;
        num.insert(num.end(), o.num.begin(), o.num.end());
        den.insert(den.end(), o.den.begin(), o.den.end());
        return *this;
    }

    C value_at_zero() const {
        if (power > 0) return C(0);
        if (power < 0) throw std::runtime_error("pole at 0");
        return pref;
    }
    // limit as x -> infinity of the rational function
    C value_at_inf() const {
        int deg = power + int(num.size()) - int(den.size());
        if (deg > 0) throw std::runtime_error("pole at infinity");
        if (deg < 0) return C(0);
        C v = pref;
        for (auto n : num) v *= -n;
        for (auto d : den) v /= -d;
        return v;
    }
    bool balanced(typename C::value_type tol) const {
        using std::abs;
        try { return abs(value_at_zero() * value_at_inf() - C(1)) <= tol; }
        catch (...) { return false; }
    }

    C eval(C x) const {
        C v = pref * BasicParams<C>::ipow(x, power);
        for (auto n : num) v *= (C(1) - n * x);
        for (auto d : den) v /= (C(1) - d * x);
        return v;
    }
};

using FactorRatio = BasicFactorRatio<cplx>;

enum class At { Zero, Infinity };

// Laurent expansion of a FactorRatio, either around x=0 (series in x) or
// around x=infinity (series in 1/x, returned in the variable y=1/x).
template <class C>
BasicSeries<C> expand_rational(BasicFactorRatio<C> const& f, At where, int order) {
    BasicSeries<C> s(C(0), 0, order);
    s.c[0] = f.pref;
    auto mul_linear = [&](C a, C b) {
        // multiply by (a + b t) where t is the expansion variable
        BasicSeries<C> r(C(0), 0, order);
        for (int k = 0; k <= order; ++k) {
            C v = a * s.coeff(k);
            if (k > 0) v += b * s.coeff(k - 1);
            r.at(k) = v;
        }
        s = r;
    };
    auto mul_geom = [&](C a, C b) {
        // multiply by 1/(a + b t) = (1/a) * 1/(1 + (b/a) t)
        using std::abs;
        if (abs(a) == typename C::value_type(0))
            throw std::runtime_error("expand_rational: pole at expansion point");
        C q = -b / a;
        BasicSeries<C> r(C(0), 0, order);
        // r = s * (1/a) * sum q^m t^m
        for (int k = 0; k <= order; ++k) {
            C v(0), qp(1);
            for (int m = 0; m <= k; ++m) { v += s.coeff(k - m) * qp; qp *= q; }
            r.at(k) = v / a;
        }
        s = r;
    };
    if (where == At::Zero) {
        for (auto n : f.num) mul_linear(C(1), -n);
        for (auto d : f.den) mul_geom(C(1), -d);
        return s.shifted(f.power);
    }
    // at infinity: x = 1/y; (1 - n x) = (-n) y^{-1} (1 - y/n) for n != 0,
    // 1/(1 - d x) = (-1/d) y / (1 - y/d) for d != 0; x^p = y^{-p}.
    int yshift = -f.power;
    for (auto n : f.num) {
        using std::abs;
        if (abs(n) == typename C::value_type(0)) continue; // factor (1-0*x) == 1
        s = s * (-n);
        mul_linear(C(1), -C(1) / n);
        yshift -= 1;
    }
    for (auto d : f.den) {
        using std::abs;
        if (abs(d) == typename C::value_type(0)) continue;
        s = s * (-C(1) / d);
        mul_geom(C(1), -C(1) / d);
        yshift += 1;
    }
    return s.shifted(yshift);
}

} // namespace toroidal
