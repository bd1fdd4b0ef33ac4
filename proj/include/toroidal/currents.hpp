#pragma once
// Standard module specs: the toroidal currents on colored Fock factors,
// vector modules, two-factor coproduct modules, the fused ladder currents
// k_r^+/-, and a relation verifier for the defining current algebra.

#include "toroidal/qfunc.hpp"
#include "toroidal/vertexop.hpp"

#include <map>
#include <string>

namespace toroidal {

// one parameter family (base or checked) flattened out
struct Fam {
    cplx q[4], s[4], logq[4];
    cplx beta;
    cplx kappa(int r) const {
        return (cplx(1) - Params::ipow(q[1], r)) * (cplx(1) - Params::ipow(q[2], r)) *
               (cplx(1) - Params::ipow(q[3], r));
    }
    // c_i = -(s_j - s_j^{-1})(s_k - s_k^{-1})
    cplx c(int i) const {
        int j = i == 1 ? 2 : 1, k = i == 3 ? 2 : 3;
        return -(s[j] - cplx(1) / s[j]) * (s[k] - cplx(1) / s[k]);
    }
    // coefficients of g(z,w) = (z-q1 w)(z-q2 w)(z-q3 w) on z^{3-k} w^k
    std::array<cplx, 4> gpoly() const {
        cplx e1 = q[1] + q[2] + q[3];
        cplx e2 = q[1] * q[2] + q[1] * q[3] + q[2] * q[3];
        cplx e3 = q[1] * q[2] * q[3];
        return {cplx(1), -e1, e2, -e3};
    }
};

inline Fam family(Params const& p, bool checked) {
    Fam f;
    if (!checked) {
        f.q[1] = p.q1; f.q[2] = p.q2; f.q[3] = p.q3;
        f.s[1] = p.s1; f.s[2] = p.s2; f.s[3] = p.s3;
        f.logq[1] = p.log_q1; f.logq[2] = p.log_q2; f.logq[3] = p.log_q3;
        f.beta = p.beta;
    } else {
        f.q[1] = p.qc1; f.q[2] = p.qc2; f.q[3] = p.qc3;
        f.s[1] = p.sc1; f.s[2] = p.sc2; f.s[3] = p.sc3;
        f.logq[1] = p.log_qc1; f.logq[2] = p.log_qc2; f.logq[3] = p.log_qc3;
        f.beta = p.beta_check;
    }
    return f;
}

inline Fam factor_family(Space const& sp, int f) {
    return family(*sp.par, sp.factors[f].checked);
}

// (1 - c^r) as a geometric sum in r
inline GeomSum gs_one_minus(cplx c) {
    GeomSum g;
    g.push(1, 1);
    g.push(-1, c);
    return g;
}

enum class Cur { E, F, PsiP, PsiM, XiP, XiM, Phi, PhiStar, K0P, K0M };

// current acting on one Fock factor (identity on the others)
inline VertexOp fock_current(Space const& sp, int fi, Cur which) {
    Fam F = factor_family(sp, fi);
    auto const& ff = sp.factors[fi];
    int c = ff.color, a = c == 1 ? 2 : 1, b = c == 3 ? 2 : 3;
    VertexOp v = VertexOp::unit(sp);
    cplx sc = F.s[c];

    // lambda(n) as an affine form, and exp(t * lambda(n)) prefactors
    auto pref_exp = [&sp, fi](cplx t) {
        return std::function<cplx(std::vector<int> const&)>(
            [&sp, fi, t](std::vector<int> const& n) {
                return std::exp(t * sp.factors[fi].lambda(n));
            });
    };
    auto lam_alpha = [&]() {
        AlphaForm al; al.lin.assign(sp.num_sectors, cplx(0));
        al.cst = ff.lambda0;
        if (ff.sector >= 0) al.lin[ff.sector] = ff.lambda_step;
        return al;
    };

    switch (which) {
    case Cur::XiP:
    case Cur::E: {
        v.cr[fi] = gs_one_minus(F.q[a]) * gs_one_minus(F.q[b]);
        v.ca[fi] = gs_one_minus(cplx(1) / F.q[a]) * gs_one_minus(cplx(1) / F.q[b]);
        v.ca[fi].scale_ratio(cplx(1) / sc);
        if (which == Cur::E) {
            v.pref = pref_exp(F.logq[1]);          // v = q1^lambda
            v.scale_pref(-cplx(1) / F.c(c));
        }
        break;
    }
    case Cur::XiM:
    case Cur::F: {
        v.cr[fi] = gs_one_minus(F.q[a]) * gs_one_minus(F.q[b]);
        v.cr[fi].scale_amp(-1).scale_ratio(sc);
        v.ca[fi] = gs_one_minus(cplx(1) / F.q[a]) * gs_one_minus(cplx(1) / F.q[b]);
        v.ca[fi].scale_amp(-1);
        if (which == Cur::F) {
            v.pref = pref_exp(-F.logq[1]);         // v^{-1}
            v.scale_pref(cplx(1) / F.c(c));
        }
        break;
    }
    case Cur::PsiP: {
        // kappa_r = 1 - qa^r - qb^r - qc^r + (qa qb)^r + (qa qc)^r + (qb qc)^r - 1^r...
        v.ca[fi] = gs_one_minus(F.q[1]) * gs_one_minus(F.q[2]) * gs_one_minus(F.q[3]);
        break;
    }
    case Cur::PsiM: {
        v.cr[fi] = gs_one_minus(F.q[1]) * gs_one_minus(F.q[2]) * gs_one_minus(F.q[3]);
        break;
    }
    case Cur::K0P: {
        // kappa_r/(q1^{-r}-1) = q1^r (1-q2^r)(1-q3^r); K = s_c^{lambda}
        v.ca[fi] = gs_one_minus(F.q[2]) * gs_one_minus(F.q[3]);
        v.ca[fi].scale_ratio(F.q[1]);
        v.pref = pref_exp(std::log(sc));
        break;
    }
    case Cur::K0M: {
        // kappa_r/(q1^r-1) = -(1-q2^r)(1-q3^r)
        v.cr[fi] = gs_one_minus(F.q[2]) * gs_one_minus(F.q[3]);
        v.cr[fi].scale_amp(-1);
        v.pref = pref_exp(-std::log(sc));
        break;
    }
    case Cur::Phi: {
        if (c != 2) throw std::runtime_error("Phi: color 2 only");
        v.cr[fi] = gs_one_minus(F.q[3]); v.cr[fi].scale_amp(-1);
        v.ca[fi] = gs_one_minus(cplx(1) / F.q[3]);
        v.ca[fi].scale_amp(-1).scale_ratio(cplx(1) / sc);
        v.qsh[fi] = 1;
        v.alpha = lam_alpha();
        v.alpha.cst += F.beta / 2.0;
        if (ff.sector >= 0) v.flin[fi] = ff.lambda_step;
        break;
    }
    case Cur::PhiStar: {
        if (c != 2) throw std::runtime_error("PhiStar: color 2 only");
        v.cr[fi] = gs_one_minus(F.q[3]); v.cr[fi].scale_ratio(sc);
        v.ca[fi] = gs_one_minus(cplx(1) / F.q[3]);
        v.qsh[fi] = -1;
        v.alpha = lam_alpha();
        v.alpha.cst = -v.alpha.cst + F.beta / 2.0;
        for (auto& l : v.alpha.lin) l = -l;
        if (ff.sector >= 0) v.flin[fi] = -ff.lambda_step;
        break;
    }
    }
    return v;
}

// e^{(r)}(z) = c1^r e(z) e(q1 z) ... e(q1^{r-1} z), possibly vanished
inline VertexOp fused_e(Space const& sp, int fi, int r) {
    Fam F = factor_family(sp, fi);
    if (r == 0) return VertexOp::unit(sp);
    VertexOp acc = fock_current(sp, fi, Cur::E);
    for (int j = 1; j < r; ++j)
        acc = vo_product(acc, vo_scale_arg(fock_current(sp, fi, Cur::E),
                                           double(j) * F.logq[1]));
    acc.scale_pref(Params::ipow(F.c(1), r));
    return acc;
}

// f^{(r)}(z) = (-c1)^r f(q1^{r-1} z) ... f(q1 z) f(z)
inline VertexOp fused_f(Space const& sp, int fi, int r) {
    Fam F = factor_family(sp, fi);
    if (r == 0) return VertexOp::unit(sp);
    VertexOp acc = vo_scale_arg(fock_current(sp, fi, Cur::F), double(r - 1) * F.logq[1]);
    for (int j = r - 2; j >= 0; --j)
        acc = vo_product(acc, vo_scale_arg(fock_current(sp, fi, Cur::F),
                                           double(j) * F.logq[1]));
    acc.scale_pref(Params::ipow(-F.c(1), r));
    return acc;
}

// k_r^+(z) = f^{(r)}(z) k_0^+(z);  k_r^-(z) = k_0^-(z) e^{(r)}(z)
inline VertexOp k_current(Space const& sp, int fi, int r, int sign) {
    if (sign > 0) return vo_product(fused_f(sp, fi, r), fock_current(sp, fi, Cur::K0P));
    return vo_product(fock_current(sp, fi, Cur::K0M), fused_e(sp, fi, r));
}

// ---------------------------------------------------------------------------
// relation verification

struct RelRes {
    double residual = 0;
    long clean = 0, contaminated = 0;
    void absorb(CompareResult const& c) {
        residual = std::max(residual, c.residual);
        clean += c.clean; contaminated += c.contaminated;
    }
};
using E1Report = std::map<std::string, RelRes>;

inline double worst_residual(E1Report const& r) {
    double v = 0;
    for (auto& [k, x] : r) v = std::max(v, x.residual);
    return v;
}

// right-compose an accumulated product with one more current power
inline Coeff compose(Coeff const& AB, MatCurrent const& Cc, int pc) {
    Coeff out; out.sp = AB.sp;
    int ns = (int)Cc.sp->slices.size();
    for (int s = 0; s < ns; ++s)
        if (pc >= Cc.lost_bound(s)) out.bad.insert(s);
    auto it = Cc.blocks.find(pc);
    if (it != Cc.blocks.end())
        for (auto& [st, mc] : it->second) {
            int src = st.first, mid = st.second;
            if (AB.bad.count(mid)) out.bad.insert(src);
            for (auto& [st2, mab] : AB.m) {
                if (st2.first != mid) continue;
                out.add(src, st2.second, mab * mc);
            }
        }
    out.scale = out.max_abs();
    return out;
}

struct E1Module {
    Space const* sp = nullptr;
    Fam fam;                     // algebra parameters the relations refer to
    MatCurrent e, f, psiP, psiM;
    std::map<int, MatCurrent> h; // Heisenberg modes, r != 0
    cplx C{1};                   // level
};

namespace detail {
inline Coeff czero(Space const& sp) { Coeff c; c.sp = &sp; return c; }

// sum_k G_k A^{3-k} X[P-(3-k)] Y[Q-k]   (X applied after Y)
inline Coeff gsum(std::array<cplx, 4> const& G, cplx A,
                  MatCurrent const& X, int P, MatCurrent const& Y, int Q) {
    Coeff acc; acc.sp = X.sp;
    for (int k = 0; k <= 3; ++k) {
        Coeff t = compose(X, P - (3 - k), Y, Q - k);
        t *= G[k] * Params::ipow(A, 3 - k);
        acc += t;
    }
    return acc;
}
} // namespace detail

// all defining relation families on one module; pw = probed power window
inline E1Report verify_e1(E1Module const& W, int pw, int serre_w = 1, int hmax = 3) {
    E1Report rep;
    auto G = W.fam.gpoly();
    cplx C = W.C;
    Space const& sp = *W.sp;

    // [h_r, h_s] = delta_{r+s,0} (1/r)(C^r - C^{-r})/kappa_r
    for (int r = -hmax; r <= hmax; ++r)
        for (int s = -hmax; s <= hmax; ++s) {
            if (r == 0 || s == 0) continue;
            auto ir = W.h.find(r), is = W.h.find(s);
            if (ir == W.h.end() || is == W.h.end()) continue;
            auto keys = [](MatCurrent const& m) {
                std::vector<int> k;
                for (auto& [p, b] : m.blocks) k.push_back(p);
                return k;
            };
            Coeff acc = detail::czero(sp);
            for (int ka : keys(ir->second))
                for (int kb : keys(is->second)) {
                    Coeff ab = compose(ir->second, ka, is->second, kb);
                    Coeff ba = compose(is->second, kb, ir->second, ka);
                    ba *= cplx(-1);
                    ab += ba;
                    acc += ab;
                }
            Coeff rhs = detail::czero(sp);
            if (r + s == 0) {
                cplx norm = (Params::ipow(C, r) - Params::ipow(C, -r)) /
                            (double(r) * W.fam.kappa(r));
                for (int sid = 0; sid < (int)sp.slices.size(); ++sid) {
                    Mat m(sp.dim(sid), sp.dim(sid));
                    for (int i = 0; i < m.rows; ++i) m(i, i) = norm;
                    rhs.add(sid, sid, m);
                }
            }
            rep["hh"].absorb(compare_rel(acc, rhs));
        }

    for (int P = -pw; P <= pw; ++P)
        for (int Q = -pw; Q <= pw; ++Q) {
            // psi-e family: g(A z,w) psi(z) e(w) + g(w,A z) e(w) psi(z) = 0
            for (int sgn = 0; sgn < 2; ++sgn) {
                MatCurrent const& psi = sgn ? W.psiM : W.psiP;
                cplx A = sgn ? cplx(1) : C;
                Coeff t1 = detail::gsum(G, A, psi, P, W.e, Q);
                Coeff t2; t2.sp = &sp;
                for (int k = 0; k <= 3; ++k) {
                    Coeff t = compose(W.e, Q - (3 - k), psi, P - k);
                    t *= G[k] * Params::ipow(A, k);
                    t2 += t;
                }
                t1 += t2;
                rep["psi_e"].absorb(compare_rel(t1, detail::czero(sp)));
            }
            // psi-f family: g(w,A z) psi(z) f(w) + g(A z,w) f(w) psi(z) = 0
            for (int sgn = 0; sgn < 2; ++sgn) {
                MatCurrent const& psi = sgn ? W.psiM : W.psiP;
                cplx A = sgn ? C : cplx(1);
                Coeff t1; t1.sp = &sp;
                for (int k = 0; k <= 3; ++k) {
                    Coeff t = compose(psi, P - k, W.f, Q - (3 - k));
                    t *= G[k] * Params::ipow(A, k);
                    t1 += t;
                }
                Coeff t2; t2.sp = &sp;
                for (int k = 0; k <= 3; ++k) {
                    Coeff t = compose(W.f, Q - k, psi, P - (3 - k));
                    t *= G[k] * Params::ipow(A, 3 - k);
                    t2 += t;
                }
                t1 += t2;
                rep["psi_f"].absorb(compare_rel(t1, detail::czero(sp)));
            }
            // [e_P, f_Q] = (1/kappa1)(C^{-P} psi+[P+Q] - C^{-Q} psi-[P+Q])
            {
                Coeff lhs = compose(W.e, P, W.f, Q);
                Coeff fe = compose(W.f, Q, W.e, P);
                fe *= cplx(-1);
                lhs += fe;
                Coeff rhs = coeff_at(W.psiP, P + Q);
                rhs *= Params::ipow(C, -P) / W.fam.kappa(1);
                Coeff r2 = coeff_at(W.psiM, P + Q);
                r2 *= -Params::ipow(C, -Q) / W.fam.kappa(1);
                rhs += r2;
                rep["ef"].absorb(compare_rel(lhs, rhs));
            }
            // g(z,w) e(z)e(w) + g(w,z) e(w)e(z) = 0, same for f with g flipped
            {
                Coeff t = detail::gsum(G, 1, W.e, P, W.e, Q);
                Coeff u; u.sp = &sp;
                for (int k = 0; k <= 3; ++k) {
                    Coeff s = compose(W.e, Q - (3 - k), W.e, P - k);
                    s *= G[k];
                    u += s;
                }
                t += u;
                rep["ee"].absorb(compare_rel(t, detail::czero(sp)));
            }
            {
                Coeff t; t.sp = &sp;
                for (int k = 0; k <= 3; ++k) {
                    Coeff s = compose(W.f, P - k, W.f, Q - (3 - k));
                    s *= G[k];
                    t += s;
                }
                Coeff u; u.sp = &sp;
                for (int k = 0; k <= 3; ++k) {
                    Coeff s = compose(W.f, Q - k, W.f, P - (3 - k));
                    s *= G[k];
                    u += s;
                }
                t += u;
                rep["ff"].absorb(compare_rel(t, detail::czero(sp)));
            }
        }

    // Serre: Sym_{z1,z2,z3} z1 z2^2 [x(z1),[x(z2),x(z3)]] = 0
    auto serre = [&](MatCurrent const& x, char const* name) {
        auto T = [&](int a, int b, int c) {
            Coeff ab = compose(x, a, x, b);
            return compose(ab, x, c);
        };
        auto Brk = [&](int a, int b, int c) {
            Coeff r = T(a, b, c);
            Coeff t = T(a, c, b); t *= cplx(-1); r += t;
            t = T(b, c, a); t *= cplx(-1); r += t;
            t = T(c, b, a); r += t;
            return r;
        };
        int perm[6][3] = {{0,1,2},{0,2,1},{1,0,2},{1,2,0},{2,0,1},{2,1,0}};
        for (int P1 = -serre_w; P1 <= serre_w; ++P1)
            for (int P2 = -serre_w; P2 <= serre_w; ++P2)
                for (int P3 = -serre_w; P3 <= serre_w; ++P3) {
                    Coeff acc; acc.sp = &sp;
                    int Pv[3] = {P1, P2, P3};
                    for (auto& pm : perm)
                        acc += Brk(Pv[pm[0]] - 1, Pv[pm[1]] - 2, Pv[pm[2]]);
                    rep[name].absorb(compare_rel(acc, detail::czero(sp)));
                }
    };
    serre(W.e, "serre_e");
    serre(W.f, "serre_f");
    return rep;
}

// ---------------------------------------------------------------------------
// module builders

inline E1Module make_fock_e1(Space const& sp, int fi, int hmax = 3) {
    E1Module W;
    W.sp = &sp;
    W.fam = factor_family(sp, fi);
    W.e = materialize(fock_current(sp, fi, Cur::E)).integerize();
    W.f = materialize(fock_current(sp, fi, Cur::F)).integerize();
    W.psiP = materialize(fock_current(sp, fi, Cur::PsiP)).integerize();
    W.psiM = materialize(fock_current(sp, fi, Cur::PsiM)).integerize();
    for (int r = 1; r <= hmax; ++r) {
        W.h[r] = h_mode(sp, fi, r);
        W.h[-r] = h_mode(sp, fi, -r);
    }
    W.C = sp.factor_level(fi);
    return W;
}

// series log of a power series with f(0) = 1 (window [0, n])
inline Series series_log(Series const& f) {
    if (f.lo != 0 || std::abs(f.coeff(0) - cplx(1)) > 1e-12)
        throw std::runtime_error("series_log: constant term must be 1");
    int n = f.hi;
    Series g(cplx(0), 1, n); // log f, starts at order 1
    for (int k = 1; k <= n; ++k) {
        // k f_k = sum_{j=1..k} j g_j f_{k-j}
        cplx s = double(k) * f.coeff(k);
        for (int j = 1; j < k; ++j) s -= double(j) * g.coeff(j) * f.coeff(k - j);
        g.at(k) = s / double(k);
    }
    return g;
}

// vector module of color 1: one-dimensional slices indexed by a sector
inline E1Module make_vector_e1(Space& sp, Params const& p, cplx log_v,
                               int window, int pmax, int hmax = 3) {
    sp.par = &p;
    sp.factors.clear();
    sp.D = 0; sp.num_sectors = 1; sp.W = window;
    sp.build();

    E1Module W;
    W.sp = &sp;
    W.fam = family(p, false);
    W.C = 1;
    cplx inv = cplx(1) / (cplx(1) / p.s1 - p.s1);

    auto hop = [&](MatCurrent& mc, int step, std::function<cplx(int, int)> coef) {
        mc.sp = &sp;
        for (int i = -window; i <= window; ++i) {
            int src = sp.find_slice(0, {i});
            int ti = i + step;
            if (std::abs(ti) > window) { mc.note_lost(src, INT_MIN); continue; }
            int tgt = sp.find_slice(0, {ti});
            for (int k = -pmax; k <= pmax; ++k) {
                cplx v = coef(i, k);
                if (v == cplx(0)) continue;
                Mat m(1, 1); m(0, 0) = v;
                mc.add_block(k, src, tgt, m);
            }
        }
    };

    // e(z)|i> = inv * delta(q1^i v / z)|i+1>: coefficient of z^p is (q1^i v)^{-p}
    hop(W.e, +1, [&](int i, int k) {
        return inv * std::exp(-double(k) * (double(i) * p.log_q1 + log_v));
    });
    hop(W.f, -1, [&](int i, int k) {
        return inv * std::exp(-double(k) * (double(i - 1) * p.log_q1 + log_v));
    });

    // psi expansion coefficients of omega(a/z) at z = inf (+) / z = 0 (-)
    int n = pmax;
    auto om = omega_ratio(p.q2, p.q3);
    Series sP = expand_rational(om, At::Zero, n);      // powers of x = a/z
    Series sM = expand_rational(om, At::Infinity, n);  // powers of 1/x = z/a
    hop(W.psiP, 0, [&](int i, int k) {
        if (k > 0) return cplx(0);
        cplx a = std::exp(double(i) * p.log_q1 + log_v);
        return sP.coeff(-k) * Params::ipow(a, -k);
    });
    hop(W.psiM, 0, [&](int i, int k) {
        if (k < 0) return cplx(0);
        cplx a = std::exp(double(i) * p.log_q1 + log_v);
        return sM.coeff(k) * Params::ipow(a, -k); // coefficient on x^{-k}
    });

    // h_r from log omega: psi+ = exp(sum kappa_r h_r z^{-r})
    Series lgP = series_log(sP.truncated(hmax + 1));
    Series lgM = series_log(sM);
    for (int r = 1; r <= hmax; ++r) {
        hop(W.h[r], 0, [&](int i, int k) {
            if (k != 0) return cplx(0);
            cplx a = std::exp(double(i) * p.log_q1 + log_v);
            return lgP.coeff(r) * Params::ipow(a, r) / W.fam.kappa(r);
        });
        hop(W.h[-r], 0, [&](int i, int k) {
            if (k != 0) return cplx(0);
            cplx a = std::exp(double(i) * p.log_q1 + log_v);
            return lgM.coeff(r) * Params::ipow(a, -r) / W.fam.kappa(r);
        });
    }
    return W;
}

// two-factor coproduct module: Delta e = e x 1 + psi- x e(C1 z), etc.
inline E1Module make_coproduct_e1(Space const& sp, int f0, int f1, int hmax = 3) {
    E1Module W;
    W.sp = &sp;
    W.fam = factor_family(sp, f0);
    cplx C1 = sp.factor_level(f0), C2 = sp.factor_level(f1);
    cplx lC1 = std::log(C1), lC2 = std::log(C2);
    W.C = C1 * C2;

    auto mat = [&](std::vector<VertexOp> const& terms) {
        VOCurrent c;
        for (auto& t : terms) c += t;
        return c.materialize_int();
    };
    VertexOp e0 = fock_current(sp, f0, Cur::E);
    VertexOp e1C = vo_scale_arg(fock_current(sp, f1, Cur::E), lC1);
    VertexOp f1v = fock_current(sp, f1, Cur::F);
    VertexOp f0C = vo_scale_arg(fock_current(sp, f0, Cur::F), lC2);
    VertexOp psm0 = fock_current(sp, f0, Cur::PsiM);
    VertexOp psp1 = fock_current(sp, f1, Cur::PsiP);

    W.e = mat({e0, vo_product(psm0, e1C)});
    W.f = mat({vo_product(f0C, psp1), f1v});
    W.psiM = mat({vo_product(psm0, vo_scale_arg(fock_current(sp, f1, Cur::PsiM), lC1))});
    W.psiP = mat({vo_product(vo_scale_arg(fock_current(sp, f0, Cur::PsiP), lC2), psp1)});

    // Delta h_{-r} = h_{-r} x 1 + C1^r (1 x h_{-r});  Delta h_r = C2^{-r} h_r x 1 + 1 x h_r
    for (int r = 1; r <= hmax; ++r) {
        MatCurrent up = h_mode(sp, f0, -r);
        MatCurrent up2 = h_mode(sp, f1, -r);
        up2 *= Params::ipow(C1, r);
        up += up2;
        W.h[-r] = std::move(up);
        MatCurrent dn = h_mode(sp, f0, r);
        dn *= Params::ipow(C2, -r);
        MatCurrent dn2 = h_mode(sp, f1, r);
        dn += dn2;
        W.h[r] = std::move(dn);
    }
    return W;
}

// compare two materialized currents over all powers present in either
inline RelRes compare_currents(MatCurrent const& A, MatCurrent const& B) {
    RelRes out;
    std::set<int> keys;
    for (auto& [k, m] : A.blocks) keys.insert(k);
    for (auto& [k, m] : B.blocks) keys.insert(k);
    if (keys.empty()) keys.insert(0);
    for (int k : keys)
        out.absorb(compare(coeff_at(A, k), coeff_at(B, k)));
    return out;
}

} // namespace toroidal
