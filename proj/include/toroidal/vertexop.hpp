#pragma once
// Vertex operators over the Fock blocks of fock.hpp.
//
// Every operator handled here is of the shape
//   pref(n) * e^{Q-shifts} * z^{alpha(n)}
//     * prod_f exp( sum_r cr_f(r) h^f_{-r} z^r ) exp( sum_r ca_f(r) h^f_r z^-r )
// where the coefficient sequences cr_f, ca_f are finite sums of geometric
// sequences in r.  That closure lets normal ordering of products be done in
// closed form: the contraction kernel is a (typically integer-exponent)
// product prod_k (1 - C_k x)^{E_k}, which we can evaluate anywhere, expand as
// a series, and inspect for zeros/poles of definite order at fusion points.

#include <cmath>
#include <functional>

#include "toroidal/fock.hpp"
#include "toroidal/series.hpp"

namespace toroidal {

// f(r) = sum_i amp_i * ratio_i^r, defined for r >= 1
struct GeomSum {
    std::vector<std::pair<cplx, cplx>> t; // (amp, ratio)
    cplx eval(int r) const {
        cplx v{};
        for (auto& [a, c] : t) v += a * Params::ipow(c, r);
        return v;
    }
    bool empty() const { return t.empty(); }
    GeomSum& push(cplx amp, cplx ratio) { t.push_back({amp, ratio}); return *this; }
    GeomSum& scale_amp(cplx s) { for (auto& x : t) x.first *= s; return *this; }
    GeomSum& scale_ratio(cplx s) { for (auto& x : t) x.second *= s; return *this; }
    GeomSum operator*(GeomSum const& o) const {
        GeomSum r;
        for (auto& [a, c] : t)
            for (auto& [b, d] : o.t) r.push(a * b, c * d);
        return r;
    }
    GeomSum concat(GeomSum const& o) const {
        GeomSum r = *this;
        r.t.insert(r.t.end(), o.t.begin(), o.t.end());
        return r;
    }
};

// expansion of r |-> 1/(1 - c^r) as a geometric-sum family, |c| != 1
inline GeomSum inv_one_minus(cplx c, double cut = 1e-14) {
    GeomSum g;
    double ac = std::abs(c);
    if (std::abs(ac - 1.0) < 1e-6)
        throw std::runtime_error("inv_one_minus: ratio on unit circle");
    if (ac < 1.0) {
        cplx p = 1;
        while (std::abs(p) > cut) { g.push(1, p); p *= c; }
    } else {
        cplx ci = cplx(1) / c, p = ci;
        while (std::abs(p) > cut) { g.push(-1, p); p *= ci; }
    }
    return g;
}

// r * [h_r, h_{-r}] for factor f: equals -s_c^{-r} / ((1-q_a^r)(1-q_b^r))
// with (a,b) the complementary colors; expanded into unit-weight geometrics.
inline GeomSum rg_geom(Space const& sp, int f, double cut = 1e-13) {
    auto const& p = *sp.par;
    auto const& ff = sp.factors[f];
    cplx qs[4];
    if (!ff.checked) { qs[1] = p.q1; qs[2] = p.q2; qs[3] = p.q3; }
    else { qs[1] = p.qc1; qs[2] = p.qc2; qs[3] = p.qc3; }
    int c = ff.color, a = c == 1 ? 2 : 1, b = c == 3 ? 2 : 3;
    cplx sc_inv = cplx(1) / sp.factor_level(f);
    GeomSum g = inv_one_minus(qs[a], cut) * inv_one_minus(qs[b], cut);
    g.scale_amp(-1);
    g.scale_ratio(sc_inv);
    // drop negligible combined terms
    GeomSum out;
    for (auto& [amp, ratio] : g.t)
        if (std::abs(ratio) > cut) out.push(amp, ratio);
    return out;
}

// norm [h_r, h_{-r}] itself (numeric, per r)
inline cplx h_norm(Space const& sp, int f, int r) {
    auto const& p = *sp.par;
    auto const& ff = sp.factors[f];
    cplx C = sp.factor_level(f);
    cplx kap = ff.checked ? p.kappa_check(r) : p.kappa(r);
    return (Params::ipow(C, r) - Params::ipow(C, -r)) / (double(r) * kap);
}

// contraction kernel prod_k (1 - C_k x)^{E_k}; exponents kept as complex but
// are integers for all operators built here (checked when exact zero/pole
// order matters)
struct Contraction {
    std::vector<std::pair<cplx, cplx>> fac; // (E_k, C_k)

    // build from the pairing sum  log phi = sum_r P(r) x^r / r
    // with P given as a geometric sum: P(r) = sum W_k C_k^r  =>  E_k = -W_k
    static Contraction from_pairing(GeomSum const& P, double cut = 1e-13) {
        // merge terms with (numerically) identical ratios
        std::vector<std::pair<cplx, cplx>> v; // (ratio, weight)
        for (auto& [w, c] : P.t) v.push_back({c, w});
        std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
            if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
            return a.first.imag() < b.first.imag();
        });
        Contraction out;
        size_t i = 0;
        while (i < v.size()) {
            cplx ratio = v[i].first, w = v[i].second;
            size_t j = i + 1;
            while (j < v.size() &&
                   std::abs(v[j].first - ratio) <= 1e-12 * (1.0 + std::abs(ratio))) {
                w += v[j].second; ++j;
            }
            if (std::abs(w) > cut && std::abs(ratio) > cut)
                out.fac.push_back({-w, ratio});
            i = j;
        }
        return out;
    }

    Contraction operator*(Contraction const& o) const {
        Contraction r = *this;
        r.fac.insert(r.fac.end(), o.fac.begin(), o.fac.end());
        return r;
    }

    // value at x with explicit order accounting at near-singular factors
    struct Val { cplx value{1}; int order = 0; };
    Val eval(cplx x, double singtol = 1e-8) const {
        Val v;
        for (auto& [E, C] : fac) {
            cplx u = cplx(1) - C * x;
            if (std::abs(u) < singtol) {
                double ei = std::round(E.real());
                if (std::abs(E - cplx(ei)) > 1e-6)
                    throw std::runtime_error("contraction: non-integer order at singular point");
                v.order += (int)ei;
                continue;
            }
            double ei = std::round(E.real());
            if (std::abs(E - cplx(ei)) < 1e-9) {
                v.value *= Params::ipow(u, (long)ei);
            } else {
                if (std::abs(C * x) > 0.999)
                    throw std::runtime_error("contraction: non-integer exponent outside disk");
                v.value *= std::exp(E * std::log(u));
            }
        }
        return v;
    }

    // series in x around 0 up to x^order
    Series expand(int order) const {
        Series lg(cplx(0), 1, order);
        for (auto& [E, C] : fac) {
            cplx p = C;
            for (int r = 1; r <= order; ++r) {
                lg.at(r) += -E * p / double(r);
                p *= C;
            }
        }
        return lg.exp_series();
    }
};

struct VertexOp {
    Space const* sp = nullptr;
    std::vector<GeomSum> cr, ca;  // per factor
    std::vector<int> qsh;          // zero-mode steps per factor (sector units)
    AlphaForm alpha;               // z-exponent, affine in the sector vector
    std::vector<cplx> flin;        // alpha.lin attributed to factors: z^P of
                                   // factor f commutes with e^Q of any other
    std::function<cplx(std::vector<int> const&)> pref; // on the source sector
    int parity = 0;
    std::function<double(std::vector<int> const&, State const&)> sign_rule;
    bool vanished = false;

    static VertexOp unit(Space const& s) {
        VertexOp v;
        v.sp = &s;
        v.cr.resize(s.factors.size());
        v.ca.resize(s.factors.size());
        v.qsh.assign(s.factors.size(), 0);
        v.alpha.lin.assign(s.num_sectors, cplx(0));
        v.flin.assign(s.factors.size(), cplx(0));
        return v;
    }
    cplx prefactor(std::vector<int> const& n) const {
        return pref ? pref(n) : cplx(1);
    }
    std::vector<int> sector_shift() const {
        std::vector<int> dn(sp->num_sectors, 0);
        std::vector<bool> seen(sp->num_sectors, false);
        for (size_t f = 0; f < sp->factors.size(); ++f) {
            int s = sp->factors[f].sector;
            if (s < 0) {
                if (qsh[f] != 0) throw std::runtime_error("zero-mode shift on sectorless factor");
                continue;
            }
            if (qsh[f] == 0) continue;
            if (seen[s] && dn[s] != qsh[f])
                throw std::runtime_error("inconsistent sector shifts");
            dn[s] = qsh[f]; seen[s] = true;
        }
        return dn;
    }
    VertexOp& scale_pref(cplx c) {
        auto old = pref;
        pref = old ? std::function<cplx(std::vector<int> const&)>(
                         [old, c](std::vector<int> const& n) { return c * old(n); })
                   : std::function<cplx(std::vector<int> const&)>(
                         [c](std::vector<int> const&) { return c; });
        return *this;
    }
};

// argument scaling z -> exp(log_c) z: the fractional power c^{alpha(n)} goes
// into the prefactor through the fixed log branch
inline VertexOp vo_scale_arg(VertexOp v, cplx log_c) {
    cplx c = std::exp(log_c), ci = std::exp(-log_c);
    for (auto& g : v.cr) g.scale_ratio(c);
    for (auto& g : v.ca) g.scale_ratio(ci);
    AlphaForm a = v.alpha;
    auto old = v.pref;
    v.pref = [old, a, log_c](std::vector<int> const& n) {
        cplx base = std::exp(log_c * a.eval(n));
        return old ? old(n) * base : base;
    };
    return v;
}

// pairing kernel phi(x) for A(z) B(w), x = w/z (A to the left)
inline Contraction vo_pairing(VertexOp const& A, VertexOp const& B) {
    GeomSum P;
    for (size_t f = 0; f < A.sp->factors.size(); ++f) {
        if (A.ca[f].empty() || B.cr[f].empty()) continue;
        GeomSum g = A.ca[f] * B.cr[f] * rg_geom(*A.sp, f);
        P = P.concat(g);
    }
    return Contraction::from_pairing(P);
}

// fused product A(z) B(z) (scale arguments beforehand for unequal ones).
// If the contraction kernel vanishes at x=1 the result is flagged vanished;
// a pole throws.
inline VertexOp vo_product(VertexOp const& A, VertexOp const& B) {
    if (A.sp != B.sp) throw std::runtime_error("vo_product: space mismatch");
    if (A.sign_rule && B.sign_rule)
        throw std::runtime_error("vo_product: cannot fuse two sign-ruled operators");
    VertexOp r = VertexOp::unit(*A.sp);
    auto phi = vo_pairing(A, B).eval(cplx(1));
    if (phi.order < 0) throw std::runtime_error("vo_product: fusion pole");
    r.vanished = (phi.order > 0) || A.vanished || B.vanished;
    cplx phival = r.vanished ? cplx(0) : phi.value;
    for (size_t f = 0; f < r.cr.size(); ++f) {
        r.cr[f] = A.cr[f].concat(B.cr[f]);
        r.ca[f] = A.ca[f].concat(B.ca[f]);
        r.qsh[f] = A.qsh[f] + B.qsh[f];
    }
    std::vector<int> dnB = B.sector_shift();
    r.alpha = A.alpha + B.alpha;
    // reordering A's z^P past B's zero-mode shifts: only shifts of the same
    // factor contribute, z^P commutes with the other factors' e^Q
    for (size_t f = 0; f < r.flin.size(); ++f) {
        r.flin[f] = A.flin[f] + B.flin[f];
        r.alpha.cst += A.flin[f] * double(B.qsh[f]);
    }
    auto pa = A.pref, pb = B.pref;
    r.pref = [pa, pb, dnB, phival](std::vector<int> const& n) {
        std::vector<int> m = n;
        for (size_t s = 0; s < dnB.size(); ++s) m[s] += dnB[s];
        cplx v = phival;
        if (pb) v *= pb(n);
        if (pa) v *= pa(m);
        return v;
    };
    r.parity = (A.parity + B.parity) % 2;
    r.sign_rule = A.sign_rule ? A.sign_rule : B.sign_rule;
    return r;
}

// inverse of a one-sided operator (no zero-mode shift, only creations or
// only annihilations): exponentials negate, prefactor reciprocates
inline VertexOp vo_inverse(VertexOp v) {
    bool has_cr = false, has_ca = false;
    for (auto& g : v.cr) has_cr |= !g.empty();
    for (auto& g : v.ca) has_ca |= !g.empty();
    if (has_cr && has_ca) throw std::runtime_error("vo_inverse: two-sided operator");
    for (auto& f : v.qsh)
        if (f != 0) throw std::runtime_error("vo_inverse: shifted operator");
    for (auto& g : v.cr) g.scale_amp(-1);
    for (auto& g : v.ca) g.scale_amp(-1);
    v.alpha.cst = -v.alpha.cst;
    for (auto& l : v.alpha.lin) l = -l;
    for (auto& l : v.flin) l = -l;
    auto old = v.pref;
    v.pref = [old](std::vector<int> const& n) {
        return old ? cplx(1) / old(n) : cplx(1);
    };
    return v;
}

namespace detail {
inline double binom(int n, int k) {
    double v = 1;
    for (int i = 0; i < k; ++i) v = v * double(n - i) / double(i + 1);
    return v;
}
inline double factorial(int n) {
    double v = 1;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}
} // namespace detail

// matrix of the VO between all slices within the cutoff; key = depth change
inline MatCurrent materialize(VertexOp const& V) {
    Space const& sp = *V.sp;
    int D = sp.D, F = (int)sp.factors.size();
    MatCurrent out; out.sp = &sp; out.alpha = V.alpha;
    if (V.vanished) return out;

    // numeric coefficient tables
    std::vector<std::vector<cplx>> crv(F), cav(F), gv(F);
    bool any_cr = false;
    for (int f = 0; f < F; ++f) {
        crv[f].resize(D + 1); cav[f].resize(D + 1); gv[f].resize(D + 1);
        for (int r = 1; r <= D; ++r) {
            crv[f][r] = V.cr[f].eval(r);
            cav[f][r] = V.ca[f].eval(r);
            gv[f][r] = h_norm(sp, f, r);
        }
        any_cr |= !V.cr[f].empty();
    }

    // per-factor transition blocks between partition weights
    std::vector<std::vector<Partition>> plist(D + 1);
    for (int d = 0; d <= D; ++d) plist[d] = partitions_of(d);
    // T[f][wa][wb](ib, ia): partition of weight wa -> weight wb
    std::vector<std::vector<std::vector<Mat>>> T(F);
    for (int f = 0; f < F; ++f) {
        T[f].assign(D + 1, std::vector<Mat>(D + 1));
        for (int wa = 0; wa <= D; ++wa)
            for (int wb = 0; wb <= D; ++wb) {
                Mat m((int)plist[wb].size(), (int)plist[wa].size());
                for (size_t ia = 0; ia < plist[wa].size(); ++ia)
                    for (size_t ib = 0; ib < plist[wb].size(); ++ib) {
                        cplx amp = 1;
                        for (int r = 1; r <= std::max(wa, wb) && amp != cplx(0); ++r) {
                            int a = r <= wa ? (r <= (int)plist[wa][ia].mult.size() ? plist[wa][ia].mult[r - 1] : 0) : 0;
                            int b = r <= wb ? (r <= (int)plist[wb][ib].mult.size() ? plist[wb][ib].mult[r - 1] : 0) : 0;
                            cplx s{};
                            for (int tt = 0; tt <= std::min(a, b); ++tt) {
                                cplx down = Params::ipow(cav[f][r] * gv[f][r], a - tt) * detail::binom(a, tt);
                                cplx up = Params::ipow(crv[f][r], b - tt) / detail::factorial(b - tt);
                                s += down * up;
                            }
                            amp *= s;
                        }
                        m((int)ib, (int)ia) = amp;
                    }
                T[f][wa][wb] = std::move(m);
            }
    }

    std::vector<int> dn = V.sector_shift();
    for (int sid = 0; sid < (int)sp.slices.size(); ++sid) {
        auto const& src = sp.slices[sid];
        std::vector<int> tn = src.n;
        bool out_of_window = false;
        for (size_t s = 0; s < tn.size(); ++s) {
            tn[s] += dn[s];
            if (std::abs(tn[s]) > sp.W) out_of_window = true;
        }
        if (out_of_window) { out.note_lost(sid, INT_MIN); continue; }
        if (any_cr) out.note_lost(sid, D - src.depth + 1);
        cplx base = V.prefactor(src.n);
        if (base == cplx(0)) continue;
        for (int dt = 0; dt <= D; ++dt) {
            int tid = sp.find_slice(dt, tn);
            if (tid < 0) continue;
            auto const& tgt = sp.slices[tid];
            Mat blk((int)tgt.basis.size(), (int)src.basis.size());
            bool nz = false;
            for (size_t j = 0; j < src.basis.size(); ++j) {
                cplx sgn = V.sign_rule ? V.sign_rule(src.n, src.basis[j]) : 1.0;
                for (size_t i = 0; i < tgt.basis.size(); ++i) {
                    cplx amp = base * sgn;
                    for (int f = 0; f < F && amp != cplx(0); ++f) {
                        int wa = src.basis[j][f].weight(), wb = tgt.basis[i][f].weight();
                        // position of the partition inside its weight list
                        auto& la = plist[wa];
                        auto& lb = plist[wb];
                        int ia = -1, ib = -1;
                        for (size_t k = 0; k < la.size(); ++k)
                            if (la[k].mult == src.basis[j][f].mult) { ia = (int)k; break; }
                        for (size_t k = 0; k < lb.size(); ++k)
                            if (lb[k].mult == tgt.basis[i][f].mult) { ib = (int)k; break; }
                        amp *= T[f][wa][wb](ib, ia);
                    }
                    if (amp != cplx(0)) { blk((int)i, (int)j) = amp; nz = true; }
                }
            }
            if (nz) out.add_block(dt - src.depth, sid, tid, blk);
        }
    }
    return out;
}

// sum of vertex operators sharing one alpha shape (a current)
struct VOCurrent {
    std::vector<VertexOp> terms;
    VOCurrent& operator+=(VertexOp v) { terms.push_back(std::move(v)); return *this; }
    MatCurrent materialize_int() const {
        if (terms.empty()) throw std::runtime_error("empty current");
        MatCurrent acc;
        bool first = true;
        for (auto& t : terms) {
            MatCurrent m = materialize(t);
            m.integerize();
            if (first) { acc = std::move(m); first = false; }
            else acc += m;
        }
        return acc;
    }
};

// single Heisenberg mode as a block map (key = depth change = +r or -r)
inline MatCurrent h_mode(Space const& sp, int f, int r) {
    if (r == 0) throw std::runtime_error("h_mode: r = 0");
    MatCurrent out; out.sp = &sp;
    int ar = std::abs(r);
    for (int sid = 0; sid < (int)sp.slices.size(); ++sid) {
        auto const& src = sp.slices[sid];
        int dt = src.depth + (r < 0 ? ar : -ar);
        if (r < 0 && dt > sp.D) { out.note_lost(sid, ar); continue; }
        if (dt < 0 || dt > sp.D) continue;
        int tid = sp.find_slice(dt, src.n);
        if (tid < 0) continue;
        auto const& tgt = sp.slices[tid];
        Mat blk((int)tgt.basis.size(), (int)src.basis.size());
        bool nz = false;
        for (size_t j = 0; j < src.basis.size(); ++j) {
            State st = src.basis[j];
            if ((int)st[f].mult.size() < ar) st[f].mult.resize(ar, 0);
            cplx c;
            if (r < 0) { st[f].mult[ar - 1] += 1; c = 1; }
            else {
                if (st[f].mult[ar - 1] == 0) continue;
                c = double(st[f].mult[ar - 1]) * h_norm(sp, f, ar);
                st[f].mult[ar - 1] -= 1;
            }
            while (!st[f].mult.empty() && st[f].mult.back() == 0) st[f].mult.pop_back();
            auto key = flatten_state(st);
            auto it = tgt.index.find(key);
            if (it == tgt.index.end()) continue;
            blk(it->second, (int)j) = c;
            nz = true;
        }
        if (nz) out.add_block(dt - src.depth, sid, tid, blk);
    }
    return out;
}

// diagonal operator from a per-slice scalar
inline MatCurrent diag_current(Space const& sp,
                               std::function<cplx(Slice const&)> const& fn) {
    MatCurrent out; out.sp = &sp;
    for (int sid = 0; sid < (int)sp.slices.size(); ++sid) {
        auto const& sl = sp.slices[sid];
        Mat m((int)sl.basis.size(), (int)sl.basis.size());
        cplx v = fn(sl);
        for (int i = 0; i < m.rows; ++i) m(i, i) = v;
        out.add_block(0, sid, sid, m);
    }
    return out;
}

// zero-mode shift operator e^{Q_f} alone (power key 0)
inline VertexOp vo_zero_shift(Space const& sp, int f, int step) {
    VertexOp v = VertexOp::unit(sp);
    v.qsh[f] = step;
    return v;
}

} // namespace toroidal
