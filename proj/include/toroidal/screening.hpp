#pragma once
// Screened tower intertwiners built by operator-valued contour quadrature,
// the level-two module glued from four towers, and the residue identities
// that pin its mixed-bracket normalization.

#include <cmath>
#include <functional>
#include <vector>

#include "toroidal/amn.hpp"
#include "toroidal/elliptic.hpp"

namespace toroidal {

// diagonal operator acting as a scalar function of the source sector
inline VertexOp sector_diag(Space const& sp,
                            std::function<cplx(std::vector<int> const&)> f) {
    VertexOp v = VertexOp::unit(sp);
    v.pref = std::move(f);
    return v;
}

// ---------------------------------------------------------------------------
// contour quadrature with pole bookkeeping
//
// Every integrand we meet has geometric pole chains in c = x/z: some decay
// into the origin and must end up enclosed, others grow to infinity and must
// stay outside.  Their moduli can interleave, so the contour is a circle of
// well-cleared radius plus small circles that move stray poles back to the
// correct side.

struct Contour {
    double radius = 1;
    std::vector<cplx> add;  // enclosed poles the circle misses
    std::vector<cplx> sub;  // excluded poles the circle swallows
    std::vector<cplx> keep; // all nearby singular points, for clearance checks
};

// decaying = true walks head, head*q, ... ; otherwise head, head/q, ...
// Points outside the modulus window [lo, hi] are irrelevant for planning.
inline std::vector<cplx> pole_chain(cplx head, cplx q, bool decaying,
                                    double lo, double hi) {
    std::vector<cplx> out;
    cplx p = head;
    for (int k = 0; k < 400; ++k) {
        double m = std::abs(p);
        if (decaying) {
            if (m < lo) break;
            if (m <= hi) out.push_back(p);
            p *= q;
        } else {
            if (m > hi) break;
            if (m >= lo) out.push_back(p);
            p /= q;
        }
    }
    return out;
}

inline Contour plan_contour(std::vector<cplx> const& inside,
                            std::vector<cplx> const& outside,
                            std::vector<cplx> const& spectators,
                            double radius, double margin = 0.14) {
    Contour ct;
    std::vector<cplx> all = inside;
    all.insert(all.end(), outside.begin(), outside.end());
    all.insert(all.end(), spectators.begin(), spectators.end());
    // scan for the radius with the best log-modulus clearance
    double best = -1, bestr = radius;
    for (int t = -36; t <= 36; ++t) {
        double r = radius * std::exp(0.0125 * t);
        double sc = 1e9;
        for (cplx p : all) sc = std::min(sc, std::abs(std::log(std::abs(p) / r)));
        if (sc > best) { best = sc; bestr = r; }
    }
    if (best < margin)
        throw std::runtime_error("plan_contour: no circle clears the poles");
    ct.radius = bestr;
    ct.keep = all;
    for (cplx p : inside)
        if (std::abs(p) > ct.radius) ct.add.push_back(p);
    for (cplx p : outside)
        if (std::abs(p) < ct.radius) ct.sub.push_back(p);
    return ct;
}

// (1/2 pi i) oint g(c) dc/c with the contour understood as the corrected
// circle; g receives log c on a fixed branch per node
inline MatCurrent contour_integrate(std::function<MatCurrent(cplx)> const& g,
                                    Contour const& ct, int points,
                                    int cpoints = 32) {
    MatCurrent acc;
    bool first = true;
    auto take = [&](MatCurrent m, cplx w) {
        m *= w;
        if (first) { acc = std::move(m); first = false; }
        else acc += m;
    };
    for (int k = 0; k < points; ++k) {
        double th = 2 * M_PI * (k + 0.5) / points;
        take(g(cplx(std::log(ct.radius), th)), cplx(1.0 / points));
    }
    auto correction = [&](cplx p, cplx sgn) {
        double d = 1e300;
        for (cplx q : ct.keep)
            if (std::abs(q - p) > 1e-12 * std::abs(p))
                d = std::min(d, std::abs(q - p));
        d = std::min(0.3 * d, 0.2 * std::abs(p));
        for (int k = 0; k < cpoints; ++k) {
            double th = 2 * M_PI * (k + 0.5) / cpoints;
            cplx c = p + d * std::exp(cplx(0, th));
            take(g(std::log(c)), sgn * (c - p) / (c * double(cpoints)));
        }
    };
    for (cplx p : ct.add) correction(p, cplx(1));
    for (cplx p : ct.sub) correction(p, cplx(-1));
    return acc;
}

// ---------------------------------------------------------------------------
// a screened pair: two like towers carrying raising/lowering intertwiners
// whose minus parts are contour integrals against the two-tower screening
// current weighted by the dynamical factor

struct ScreenedPair {
    Space const* sp = nullptr;
    Params const* par = nullptr;
    int f0 = 0, f1 = 1;
    bool checked = false;
    cplx beta;       // exchange exponent of this tower family
    cplx in0, out0;  // heads of the enclosed / excluded pole chains
    cplx w0;         // head of the (bilateral) weight pole chain
    int points = 256;

    MatCurrent Pp, Pm; // raising intertwiner, plus and minus parts
    MatCurrent Sp, Sm; // lowering (starred) counterpart

    cplx P12(std::vector<int> const& n) const {
        return sp->factors[f0].lambda(n) - sp->factors[f1].lambda(n);
    }
};

// one factor of a product of (possibly screened) intertwiners
struct ScreenFactor {
    bool star = false;
    bool minus = false;
    cplx lc{};          // log of the argument multiplier
    bool tilde = false; // divide by the momentum bracket at this factor's input
};

namespace detail {

inline cplx tilde_sign(ScreenFactor const& f) {
    // tilded raising: +/- for plus/minus part; tilded lowering: -/+
    double s = f.minus ? -1 : 1;
    if (f.star) s = -s;
    return cplx(s);
}

// product of intertwiner factors, with the single minus-type factor
// integrated over its contour.  All arguments are multiples of one formal z.
inline MatCurrent screened_product(ScreenedPair const& P,
                                   std::vector<ScreenFactor> const& fs,
                                   int points) {
    Space const& sp = *P.sp;
    Params const& p = *P.par;
    int nminus = 0;
    for (auto& f : fs) nminus += f.minus ? 1 : 0;
    if (nminus != 1)
        throw std::runtime_error("screened_product: exactly one minus factor");

    // pole chains of the joint kernel, in units of the formal argument
    cplx ag{};
    std::vector<cplx> ins, outs, spec;
    double rnom = 0;
    for (auto& f : fs)
        if (f.minus) { ag = std::exp(f.lc); rnom = std::abs(ag); }
    double lo = rnom * std::exp(-0.9), hi = rnom * std::exp(0.9);
    auto grow = [&](std::vector<cplx>& v, cplx head, bool dec) {
        for (cplx q : pole_chain(head, p.q1, dec, lo, hi)) v.push_back(q);
    };
    for (auto& f : fs) {
        cplx a = std::exp(f.lc);
        if (f.minus) {
            grow(ins, a * P.in0, true);
            grow(outs, a * P.out0, false);
            // weight poles cancelled by kernel zeros still need clearance
            grow(spec, a * P.w0, true);
            grow(spec, a * P.w0, false);
        } else if (f.star) {
            grow(ins, a * P.in0, true);
        } else {
            grow(outs, a * P.out0, false);
        }
    }
    Contour ct = plan_contour(ins, outs, spec, rnom);

    auto bracket = [&p](cplx u) { return theta_bracket(p, u); };
    cplx beta = P.beta;
    auto node = [&](cplx lx) {
        std::vector<VertexOp> ops;
        for (auto& f : fs) {
            VertexOp base = fock_current(sp, f.star ? P.f1 : P.f0,
                                         f.star ? Cur::PhiStar : Cur::Phi);
            ops.push_back(vo_scale_arg(base, f.lc));
            if (f.minus) {
                ops.push_back(vo_scale_arg(fock_current(sp, P.f0, Cur::PhiStar), lx));
                ops.push_back(vo_scale_arg(fock_current(sp, P.f1, Cur::Phi), lx));
                cplx u = (lx - f.lc) / p.log_q1;
                ops.push_back(sector_diag(sp, [&P, &p, u, beta](std::vector<int> const& n) {
                    return dynamical_weight(p, u, beta, P.P12(n));
                }));
            }
            if (f.tilde) {
                cplx s = tilde_sign(f);
                ops.push_back(sector_diag(sp, [&P, bracket, s](std::vector<int> const& n) {
                    return s / bracket(P.P12(n));
                }));
            }
        }
        return materialize(vo_product_many(ops));
    };
    return contour_integrate(node, ct, points);
}

} // namespace detail

inline ScreenedPair build_screened_pair(Space const& sp, Params const& p,
                                        int f0, int f1, int points = 256) {
    ScreenedPair P;
    P.sp = &sp;
    P.par = &p;
    P.f0 = f0;
    P.f1 = f1;
    P.checked = sp.factors[f0].checked;
    P.points = points;
    if (P.checked) {
        P.beta = p.beta_check;
        P.in0 = p.sc2;
        P.out0 = cplx(1) / p.sc2;
    } else {
        P.beta = p.beta;
        P.in0 = cplx(1) / p.s2;
        P.out0 = p.s2;
    }
    P.w0 = std::exp(-(cplx(1) + P.beta) / 2.0 * p.log_q1);
    P.Pp = materialize(fock_current(sp, f0, Cur::Phi));
    P.Sp = materialize(fock_current(sp, f1, Cur::PhiStar));
    P.Pm = detail::screened_product(P, {{false, true, cplx(0), false}}, points);
    P.Sm = detail::screened_product(P, {{true, true, cplx(0), false}}, points);
    return P;
}

// multiply by sign/[P12] at each source slice (the tilde normalization)
inline MatCurrent tilde_scaled(ScreenedPair const& P, MatCurrent m, cplx sign) {
    for (auto& [k, mp] : m.blocks)
        for (auto& [st, mat] : mp) {
            cplx b = theta_bracket(*P.par, P.P12(P.sp->slices[st.first].n));
            mat = mat * (sign / b);
        }
    return m;
}

// ---------------------------------------------------------------------------
// residue and regular-value extraction around a pole of a two-argument
// product: sample on rings of two radii and Richardson-combine

inline MatCurrent ring_extract(std::function<MatCurrent(cplx)> const& G,
                               cplx c0, bool residue, double delta = 0.12,
                               int angles = 12) {
    auto ring = [&](double d) {
        MatCurrent acc;
        bool first = true;
        for (int k = 0; k < angles; ++k) {
            double th = 2 * M_PI * (k + 0.37) / angles;
            cplx c = c0 * (cplx(1) + d * std::exp(cplx(0, th)));
            MatCurrent m = G(std::log(c));
            m *= residue ? (c - c0) / (c * double(angles)) : cplx(1.0 / angles);
            if (first) { acc = std::move(m); first = false; }
            else acc += m;
        }
        return acc;
    };
    MatCurrent R1 = ring(delta), R2 = ring(delta * 0.6);
    // leading quadrature error scales like d^angles
    double s = std::pow(0.6, angles);
    R1 *= cplx(-s / (1 - s));
    R2 *= cplx(1 / (1 - s));
    R2 += R1;
    return R2;
}

// ---------------------------------------------------------------------------
// diagonal ladder currents on a two-tower block (coproduct form)

inline VOCurrent pair_k(Space const& sp, Params const& p, int f0, int f1,
                        int r, int sign) {
    bool checked = sp.factors[f0].checked;
    cplx lq = checked ? p.log_qc1 : p.log_q1;
    cplx lC = (checked ? p.log_qc2 : p.log_q2) / 2.0;
    VOCurrent out;
    for (int r1 = 0; r1 <= r; ++r1) {
        int r2 = r - r1;
        if (sign > 0)
            out += vo_product(vo_scale_arg(k_current(sp, f0, r1, +1), lC),
                              vo_scale_arg(k_current(sp, f1, r2, +1), double(r1) * lq));
        else
            out += vo_product(vo_scale_arg(k_current(sp, f0, r1, -1), double(r2) * lq),
                              vo_scale_arg(k_current(sp, f1, r2, -1), lC));
    }
    return out;
}

// ---------------------------------------------------------------------------
// closed-form constants of the intertwiner pair products

struct PairConstants {
    cplx A, B;
};

inline PairConstants pair_constants(Params const& p, bool checked) {
    PairConstants c;
    cplx pq1 = qpoch_inf(p.q1, p.q1, p.tol);
    if (checked) {
        cplx e = std::exp(p.beta_check * p.log_qc2 / 4.0);
        c.A = e * pq1 / qpoch_inf(p.qc2, p.q1, p.tol);
        c.B = qpoch_inf(p.q1 / p.qc2, p.q1, p.tol) / (e * pq1);
    } else {
        cplx e = std::exp(p.beta * p.log_q2 / 4.0);
        c.A = pq1 / (e * qpoch_inf(cplx(1) / p.q2, p.q1, p.tol));
        c.B = e * qpoch_inf(p.q1 * p.q2, p.q1, p.tol) / pq1;
    }
    return c;
}

// ---------------------------------------------------------------------------
// residue identities: the mixed products of screened intertwiners have simple
// poles whose residues are the diagonal ladder coproducts, with closed-form
// scalar fronts.  Verified by ring extraction against the direct coproduct.

struct ResidueOptions {
    int points = 128; // inner contour nodes per sample
    int angles = 12;
    double delta = 0.12;
    int rmax = 1;
};

inline E1Report verify_residue_lemmas(ScreenedPair const& P,
                                      ResidueOptions const& opt = {}) {
    Params const& p = *P.par;
    Space const& sp = *P.sp;
    PairConstants cst = pair_constants(p, P.checked);
    cplx brb = theta_bracket(p, P.beta);
    cplx lq1 = p.log_q1;
    cplx lqf = P.checked ? p.log_qc1 : p.log_q1; // family's own first parameter

    E1Report out;
    auto emit = [&](std::string key, MatCurrent lhs, MatCurrent rhs) {
        out[key] = compare_currents(lhs.integerize(), rhs.integerize());
    };
    // per-source scalar on a diagonal current
    auto src_scale = [&](MatCurrent m, std::function<cplx(std::vector<int> const&)> f) {
        for (auto& [k, mp] : m.blocks)
            for (auto& [st, mat] : mp) mat = mat * f(sp.slices[st.first].n);
        return m;
    };

    for (int r = 0; r <= opt.rmax; ++r) {
        cplx c0 = P.checked ? p.qc2 * std::exp(double(r) * lq1)
                            : p.q2 * std::exp(double(-r) * lq1);
        // the ladder currents on the right-hand sides carry q1f^{-r} arguments
        cplx lsh = double(-r) * lqf;
        MatCurrent dkm = voc_scale_arg(pair_k(sp, p, P.f0, P.f1, r, -1), lsh)
                             .materialize_int();
        MatCurrent dkp = voc_scale_arg(pair_k(sp, p, P.f0, P.f1, r, +1), lsh)
                             .materialize_int();
        for (int eps : {+1, -1}) {
            std::string tag = "|r" + std::to_string(r) + (eps > 0 ? "|+" : "|-");
            if (!P.checked) {
                // raising(z) lowering(c z): residue is the minus ladder
                auto G1 = [&](cplx lc) {
                    return detail::screened_product(
                        P,
                        {{false, eps < 0, cplx(0), true}, {true, eps > 0, lc, true}},
                        opt.points);
                };
                MatCurrent lhs = ring_extract(G1, c0, true, opt.delta, opt.angles);
                MatCurrent rhs = src_scale(dkm, [&](std::vector<int> const& n) {
                    return double(eps) * cst.B * cst.B /
                           (brb * theta_bracket(p, P.P12(n)));
                });
                emit("resRL" + tag, std::move(lhs), std::move(rhs));

                // lowering(w) raising(c w): residue is the plus ladder
                auto G2 = [&](cplx lc) {
                    return detail::screened_product(
                        P,
                        {{true, eps < 0, cplx(0), true}, {false, eps > 0, lc, true}},
                        opt.points);
                };
                lhs = ring_extract(G2, c0, true, opt.delta, opt.angles);
                rhs = src_scale(dkp, [&](std::vector<int> const& n) {
                    return double(eps) * cst.B * cst.B /
                           (brb * theta_bracket(p, P.P12(n)));
                });
                emit("resLR" + tag, std::move(lhs), std::move(rhs));
            } else {
                // checked family: untilded products, momentum brackets on the
                // right-hand side
                auto G1 = [&](cplx lc) {
                    return detail::screened_product(
                        P,
                        {{true, eps < 0, lc, false}, {false, eps > 0, cplx(0), false}},
                        opt.points);
                };
                MatCurrent lhs = ring_extract(G1, c0, true, opt.delta, opt.angles);
                MatCurrent rhs = src_scale(dkm, [&](std::vector<int> const& n) {
                    return cst.B * cst.B *
                           theta_bracket(p, P.beta - double(eps) * P.P12(n)) / brb;
                });
                emit("resLRc" + tag, std::move(lhs), std::move(rhs));

                auto G2 = [&](cplx lc) {
                    return detail::screened_product(
                        P,
                        {{false, eps < 0, lc, false}, {true, eps > 0, cplx(0), false}},
                        opt.points);
                };
                lhs = ring_extract(G2, c0, true, opt.delta, opt.angles);
                rhs = src_scale(dkp, [&](std::vector<int> const& n) {
                    return cst.B * cst.B *
                           theta_bracket(p, P.beta - double(eps) * P.P12(n)) / brb;
                });
                emit("resRLc" + tag, std::move(lhs), std::move(rhs));
            }
        }

        // regular-value identity at the same point: the two cross products of
        // plus and minus parts differ by exactly the ladder current
        auto H = [&](cplx lc) {
            MatCurrent a, b;
            if (!P.checked) {
                a = detail::screened_product(
                    P, {{false, false, lc, false}, {true, true, cplx(0), false}},
                    opt.points);
                b = detail::screened_product(
                    P, {{false, true, lc, false}, {true, false, cplx(0), false}},
                    opt.points);
            } else {
                a = detail::screened_product(
                    P, {{false, false, cplx(0), false}, {true, true, lc, false}},
                    opt.points);
                b = detail::screened_product(
                    P, {{false, true, cplx(0), false}, {true, false, lc, false}},
                    opt.points);
            }
            b *= cplx(-1);
            a += b;
            return a;
        };
        MatCurrent lhs = ring_extract(H, c0, false, opt.delta, opt.angles);
        MatCurrent rhs = src_scale(P.checked ? dkm : dkp,
                                   [&](std::vector<int> const& n) {
                                       return cst.A * cst.B *
                                              theta_bracket(p, P.P12(n)) / brb;
                                   });
        emit(std::string(P.checked ? "valRLc" : "valRL") + "|r" + std::to_string(r),
             std::move(lhs), std::move(rhs));
    }
    return out;
}

// ---------------------------------------------------------------------------
// the level-two module: two base towers and two checked towers over a pair of
// sector ladders, with X currents assembled from screened intertwiners

struct F2222Options {
    cplx lam1{0.27, 0.12}, lam2{-0.41, 0.33};
    int sum1 = 1, sum2 = 0; // lam_i + lamc_i, integers
    int W = 1, D = 3;
    int points = 256;
    int imax = 2;       // X currents are cached for |i| <= imax
    double perturb = 0; // relative detuning of the lowering normalization
};

inline AmnRep build_F2222(Params const& p, Space& sp,
                          F2222Options const& opt = {}) {
    int M = p.M;
    if (((M % 2) + 2) % 2 != 1)
        throw std::runtime_error("build_F2222: M must be odd");

    auto tower = [&](bool checked, cplx lam, int sector) {
        FockFactor f;
        f.color = 2;
        f.checked = checked;
        f.lambda0 = lam;
        f.sector = sector;
        f.lambda_step = checked ? p.beta_check : p.beta;
        f.zero_modes = true;
        return f;
    };
    cplx lamc1 = cplx(double(opt.sum1)) - opt.lam1;
    cplx lamc2 = cplx(double(opt.sum2)) - opt.lam2;
    sp.par = &p;
    sp.factors = {tower(false, opt.lam1, 0), tower(false, opt.lam2, 1),
                  tower(true, lamc1, 0), tower(true, lamc2, 1)};
    sp.num_sectors = 2;
    sp.W = opt.W;
    sp.D = opt.D;
    sp.build();

    ScreenedPair PB = build_screened_pair(sp, p, 0, 1, opt.points);
    ScreenedPair PC = build_screened_pair(sp, p, 2, 3, opt.points);

    AmnRep rep;
    rep.sp = &sp;
    rep.gpar = p;
    rep.fam = family(p, false);
    rep.famc = family(p, true);
    rep.M = M;
    rep.N = 2 * M - 2;
    rep.C = p.q2;
    rep.Cc = p.qc2;

    Space const* spp = &sp;
    // generator currents are two-tower coproducts; the ladder pair shares one
    // argument convention with the single-tower module
    auto cur = [&](int fi, Cur w) { return fock_current(sp, fi, w); };
    cplx lC = p.log_q2 / 2.0, lCc = p.log_qc2 / 2.0;
    rep.e = voc_add(voc_of(cur(0, Cur::E)),
                    voc_of(vo_product(cur(0, Cur::PsiM), vo_scale_arg(cur(1, Cur::E), lC))));
    rep.f = voc_add(voc_of(vo_product(vo_scale_arg(cur(0, Cur::F), lC), cur(1, Cur::PsiP))),
                    voc_of(cur(1, Cur::F)));
    rep.psiP = voc_of(vo_product(vo_scale_arg(cur(0, Cur::PsiP), lC), cur(1, Cur::PsiP)));
    rep.psiM = voc_of(vo_product(cur(0, Cur::PsiM), vo_scale_arg(cur(1, Cur::PsiM), lC)));
    rep.ec = voc_add(voc_of(cur(2, Cur::E)),
                     voc_of(vo_product(cur(2, Cur::PsiM), vo_scale_arg(cur(3, Cur::E), lCc))));
    rep.fc = voc_add(voc_of(vo_product(vo_scale_arg(cur(2, Cur::F), lCc), cur(3, Cur::PsiP))),
                     voc_of(cur(3, Cur::F)));
    rep.psicP = voc_of(vo_product(vo_scale_arg(cur(2, Cur::PsiP), lCc), cur(3, Cur::PsiP)));
    rep.psicM = voc_of(vo_product(cur(2, Cur::PsiM), vo_scale_arg(cur(3, Cur::PsiM), lCc)));

    auto diag_sum = [&](int fa, int fb, cplx t) {
        VertexOp v = VertexOp::unit(sp);
        v.pref = [spp, fa, fb, t](std::vector<int> const& n) {
            return std::exp(t * (spp->factors[fa].lambda(n) + spp->factors[fb].lambda(n)));
        };
        return v;
    };
    rep.K = voc_of(diag_sum(0, 1, p.log_q2 / 2.0));
    rep.Kc = voc_of(diag_sum(2, 3, p.log_qc2 / 2.0));

    Params pc = p;
    rep.kk = [spp, pc](int r, int sign) { return pair_k(*spp, pc, 0, 1, r, sign); };
    rep.kkc = [spp, pc](int r, int sign) { return pair_k(*spp, pc, 2, 3, r, sign); };

    rep.Xp = [](Half) -> VOCurrent {
        throw std::runtime_error("level-two X currents are materialized up front");
    };
    rep.Xm = rep.Xp;

    // bracket normalization in front of the lowering current
    PairConstants cb = pair_constants(p, false), cc = pair_constants(p, true);
    cplx brb = theta_bracket(p, p.beta);
    double sgn = (((opt.sum1 - opt.sum2) % 2) + 2) % 2 ? -1.0 : 1.0;
    cplx N2 = brb * brb / (sgn * cb.A * cb.B * cc.B * cc.B);
    N2 *= cplx(1.0 + opt.perturb);

    MatCurrent PmT = tilde_scaled(PB, PB.Pm, cplx(-1));
    MatCurrent SmT = tilde_scaled(PB, PB.Sm, cplx(+1));
    auto tilde_op = [&](cplx s) {
        return sector_diag(sp, [&p, PB, s](std::vector<int> const& n) {
            return s / theta_bracket(p, PB.P12(n));
        });
    };
    for (int i = -opt.imax; i <= opt.imax; ++i) {
        cplx li = double(i) * p.log_q1;
        MatCurrent xp =
            materialize(vo_product_many({cur(0, Cur::Phi), tilde_op(cplx(1)),
                                         vo_scale_arg(cur(2, Cur::Phi), li)}))
                .integerize();
        xp += mat_product_int(sp, PmT, scaled_arg_frac(sp, PC.Pm, li));
        rep.cache_["X+@" + std::to_string(2 * i)] = std::move(xp);

        MatCurrent xm =
            materialize(vo_product_many({cur(1, Cur::PhiStar), tilde_op(cplx(-1)),
                                         vo_scale_arg(cur(3, Cur::PhiStar), -li)}))
                .integerize();
        xm += mat_product_int(sp, SmT, scaled_arg_frac(sp, PC.Sm, -li));
        xm *= N2;
        rep.cache_["X-@" + std::to_string(2 * i)] = std::move(xm);
    }
    return rep;
}

} // namespace toroidal
