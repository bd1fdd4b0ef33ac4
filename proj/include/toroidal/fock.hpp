#pragma once
// Degree-truncated Fock blocks.  A space is a list of Heisenberg factors
// (each a colored Fock module, possibly from the checked parameter family)
// summed over a window of zero-mode sectors.  States are tuples of
// partitions; a slice collects all states of one (depth, sector) pair.
//
// Currents materialize into integer-indexed z-power blocks between slices.
// Every place where an image escapes the cutoff is recorded, so relation
// checks can refuse to assert anything about a contaminated coefficient.

#include <algorithm>
#include <cassert>
#include <climits>
#include <complex>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "toroidal/params.hpp"

namespace toroidal {

// partition stored as multiplicities: mult[r-1] = number of parts equal r
struct Partition {
    std::vector<int> mult;
    int weight() const {
        int w = 0;
        for (size_t i = 0; i < mult.size(); ++i) w += int(i + 1) * mult[i];
        return w;
    }
};

inline std::vector<Partition> partitions_of(int w) {
    std::vector<Partition> out;
    Partition cur;
    cur.mult.assign(std::max(w, 0), 0);
    std::function<void(int, int)> rec = [&](int rem, int maxpart) {
        if (rem == 0) { out.push_back(cur); return; }
        for (int r = std::min(rem, maxpart); r >= 1; --r) {
            cur.mult[r - 1]++;
            rec(rem - r, r);
            cur.mult[r - 1]--;
        }
    };
    if (w == 0) out.push_back(cur);
    else rec(w, w);
    return out;
}

inline long long partition_count(int w) {
    static std::vector<long long> cache{1};
    while ((int)cache.size() <= w) {
        int n = (int)cache.size();
        // Euler pentagonal recurrence
        long long s = 0;
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > n && g2 > n) break;
            long long sign = (k % 2) ? 1 : -1;
            if (g1 <= n) s += sign * cache[n - g1];
            if (g2 <= n) s += sign * cache[n - g2];
        }
        cache.push_back(s);
    }
    return cache[w];
}

using State = std::vector<Partition>; // one partition per factor

struct Mat {
    int rows = 0, cols = 0;
    std::vector<cplx> a;
    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}
    cplx& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
    cplx operator()(int i, int j) const { return a[(size_t)i * cols + j]; }
    Mat operator*(Mat const& o) const {
        assert(cols == o.rows);
        Mat m(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                cplx v = (*this)(i, k);
                if (v == cplx(0)) continue;
                for (int j = 0; j < o.cols; ++j) m(i, j) += v * o(k, j);
            }
        return m;
    }
    Mat& axpy(cplx s, Mat const& o) {
        assert(rows == o.rows && cols == o.cols);
        for (size_t i = 0; i < a.size(); ++i) a[i] += s * o.a[i];
        return *this;
    }
    Mat operator*(cplx s) const {
        Mat m = *this;
        for (auto& v : m.a) v *= s;
        return m;
    }
    double max_abs() const {
        double m = 0;
        for (auto& v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

// affine form in the sector vector: cst + sum_s lin[s] * n[s]
struct AlphaForm {
    cplx cst{};
    std::vector<cplx> lin;
    cplx eval(std::vector<int> const& n) const {
        cplx v = cst;
        for (size_t s = 0; s < lin.size() && s < n.size(); ++s)
            v += lin[s] * double(n[s]);
        return v;
    }
    AlphaForm operator+(AlphaForm const& o) const {
        AlphaForm r = *this;
        r.cst += o.cst;
        if (o.lin.size() > r.lin.size()) r.lin.resize(o.lin.size());
        for (size_t s = 0; s < o.lin.size(); ++s) r.lin[s] += o.lin[s];
        return r;
    }
    cplx lin_dot(std::vector<int> const& dn) const {
        cplx v{};
        for (size_t s = 0; s < lin.size() && s < dn.size(); ++s)
            v += lin[s] * double(dn[s]);
        return v;
    }
};

struct FockFactor {
    int color = 2;          // which q plays the distinguished role
    bool checked = false;   // checked parameter family
    cplx lambda0{};         // spectral exponent: v = qb^lambda0 at n = 0
    int sector = -1;        // coupled sector index, or -1
    cplx lambda_step{};     // lambda(n) = lambda0 + n[sector] * lambda_step
    bool zero_modes = false;

    cplx lambda(std::vector<int> const& n) const {
        cplx v = lambda0;
        if (sector >= 0 && sector < (int)n.size()) v += lambda_step * double(n[sector]);
        return v;
    }
};

struct Slice {
    int depth = 0;
    std::vector<int> n;
    std::vector<State> basis;
    std::map<std::vector<int>, int> index; // flattened multiplicities -> position
};

inline std::vector<int> flatten_state(State const& st) {
    std::vector<int> key;
    for (auto const& p : st) {
        key.push_back(-1);
        size_t n = p.mult.size();
        while (n > 0 && p.mult[n - 1] == 0) --n; // canonical: no trailing zeros
        key.insert(key.end(), p.mult.begin(), p.mult.begin() + n);
    }
    return key;
}

struct Space {
    Params const* par = nullptr;
    std::vector<FockFactor> factors;
    int D = 0;              // depth cutoff
    int num_sectors = 0;
    int W = 0;              // sector window |n_s| <= W
    std::vector<Slice> slices;
    std::map<std::vector<int>, int> slice_id; // key = {depth, n...}

    // level (central scalar) of factor f
    cplx factor_level(int f) const {
        auto const& p = *par;
        auto const& ff = factors[f];
        if (!ff.checked) return ff.color == 1 ? p.s1 : ff.color == 2 ? p.s2 : p.s3;
        return ff.color == 1 ? p.sc1 : ff.color == 2 ? p.sc2 : p.sc3;
    }

    int find_slice(int depth, std::vector<int> const& n) const {
        std::vector<int> key{depth};
        key.insert(key.end(), n.begin(), n.end());
        auto it = slice_id.find(key);
        return it == slice_id.end() ? -1 : it->second;
    }

    void build() {
        slices.clear(); slice_id.clear();
        std::vector<std::vector<int>> sectors;
        std::vector<int> cur(num_sectors, -W);
        if (num_sectors == 0) sectors.push_back({});
        else {
            for (;;) {
                sectors.push_back(cur);
                int s = 0;
                while (s < num_sectors) {
                    if (++cur[s] <= W) break;
                    cur[s] = -W; ++s;
                }
                if (s == num_sectors) break;
            }
        }
        int F = (int)factors.size();
        // per-depth partition lists
        std::vector<std::vector<Partition>> plist(D + 1);
        for (int d = 0; d <= D; ++d) plist[d] = partitions_of(d);
        for (auto const& n : sectors)
            for (int d = 0; d <= D; ++d) {
                Slice sl; sl.depth = d; sl.n = n;
                // distribute depth d over F factors
                std::vector<int> dd(F, 0);
                std::function<void(int, int)> rec = [&](int f, int rem) {
                    if (f == F - 1 || F == 0) {
                        if (F == 0) { if (rem == 0) sl.basis.push_back({}); return; }
                        dd[f] = rem;
                        // cartesian product of plist[dd[g]]
                        State st(F);
                        std::function<void(int)> rec2 = [&](int g) {
                            if (g == F) { sl.basis.push_back(st); return; }
                            for (auto const& p : plist[dd[g]]) { st[g] = p; rec2(g + 1); }
                        };
                        rec2(0);
                        return;
                    }
                    for (int x = 0; x <= rem; ++x) { dd[f] = x; rec(f + 1, rem - x); }
                };
                rec(0, d);
                for (size_t i = 0; i < sl.basis.size(); ++i)
                    sl.index[flatten_state(sl.basis[i])] = (int)i;
                std::vector<int> key{d};
                key.insert(key.end(), n.begin(), n.end());
                slice_id[key] = (int)slices.size();
                slices.push_back(std::move(sl));
            }
    }

    int dim(int sid) const { return (int)slices[sid].basis.size(); }
};

// A materialized current: block matrices between slices, indexed by the
// integer z-power.  alpha is the fractional per-sector exponent base; the
// absolute exponent of entry (s,t,k) is alpha(n_src) + k.  For currents whose
// alpha is integer-valued, integerize() folds the base into the key so that
// all relation arithmetic runs on absolute powers.
struct MatCurrent {
    Space const* sp = nullptr;
    AlphaForm alpha;
    // key: power k, then (src,tgt)
    std::map<int, std::map<std::pair<int, int>, Mat>> blocks;
    // lowest power at which the image from this source escaped the space
    std::map<int, int> lost_min; // src slice -> power bound (INT_MIN = all)

    int lost_bound(int src) const {
        auto it = lost_min.find(src);
        return it == lost_min.end() ? INT_MAX : it->second;
    }
    void note_lost(int src, int bound) {
        auto it = lost_min.find(src);
        if (it == lost_min.end()) lost_min[src] = bound;
        else it->second = std::min(it->second, bound);
    }

    Mat const* block(int k, int src, int tgt) const {
        auto it = blocks.find(k);
        if (it == blocks.end()) return nullptr;
        auto jt = it->second.find({src, tgt});
        return jt == it->second.end() ? nullptr : &jt->second;
    }

    void add_block(int k, int src, int tgt, Mat const& m) {
        auto& b = blocks[k][{src, tgt}];
        if (b.rows == 0) b = m;
        else b.axpy(cplx(1), m);
    }

    MatCurrent& integerize() {
        double tol = 1e-7;
        std::map<int, std::map<std::pair<int, int>, Mat>> nb;
        for (auto& [k, mp] : blocks)
            for (auto& [st, m] : mp) {
                cplx a = alpha.eval(sp->slices[st.first].n);
                double ki = std::round(a.real());
                if (std::abs(a - cplx(ki)) > tol)
                    throw std::runtime_error("integerize: fractional exponent mismatch");
                nb[k + (int)ki][st] = std::move(m);
            }
        std::map<int, int> nl;
        for (auto& [src, bound] : lost_min) {
            if (bound == INT_MIN) { nl[src] = INT_MIN; continue; }
            cplx a = alpha.eval(sp->slices[src].n);
            nl[src] = bound + (int)std::round(a.real());
        }
        blocks = std::move(nb);
        lost_min = std::move(nl);
        alpha = AlphaForm{};
        return *this;
    }

    MatCurrent& operator+=(MatCurrent const& o) {
        for (auto& [k, mp] : o.blocks)
            for (auto& [st, m] : mp) add_block(k, st.first, st.second, m);
        for (auto& [src, b] : o.lost_min) note_lost(src, b);
        return *this;
    }
    MatCurrent& operator*=(cplx s) {
        for (auto& [k, mp] : blocks)
            for (auto& [st, m] : mp) m = m * s;
        return *this;
    }
    // X(z) -> X(c z): power k picks up c^k (and c^alpha folded by caller for
    // fractional currents; for integerized currents alpha = 0).
    MatCurrent scaled_arg(cplx c) const {
        MatCurrent r = *this;
        for (auto& [k, mp] : r.blocks) {
            cplx f = Params::ipow(c, k);
            for (auto& [st, m] : mp) m = m * f;
        }
        return r;
    }
    double max_abs() const {
        double v = 0;
        for (auto& [k, mp] : blocks)
            for (auto& [st, m] : mp) v = std::max(v, m.max_abs());
        return v;
    }
};

// one coefficient of a product of currents: blocks by (src,tgt) plus the set
// of source slices whose value passed through the truncation boundary
struct Coeff {
    Space const* sp = nullptr;
    std::map<std::pair<int, int>, Mat> m;
    std::set<int> bad;
    double scale = 0; // largest term magnitude that entered the sum

    double max_abs() const {
        double v = 0;
        for (auto& [st, x] : m) v = std::max(v, x.max_abs());
        return v;
    }
    void add(int src, int tgt, Mat const& x, cplx s = cplx(1)) {
        auto& b = m[{src, tgt}];
        if (b.rows == 0) { b = x * s; return; }
        b.axpy(s, x);
    }
    Coeff& operator+=(Coeff const& o) {
        for (auto& [st, x] : o.m) add(st.first, st.second, x);
        bad.insert(o.bad.begin(), o.bad.end());
        scale = std::max({scale, o.scale, o.max_abs()});
        return *this;
    }
    Coeff& operator*=(cplx s) {
        for (auto& [st, x] : m) x = x * s;
        scale *= std::abs(s);
        return *this;
    }
};

// one power of a single current as a Coeff (bad = sources lost at/below p)
inline Coeff coeff_at(MatCurrent const& X, int p) {
    Coeff c; c.sp = X.sp;
    int ns = (int)X.sp->slices.size();
    for (int s = 0; s < ns; ++s)
        if (p >= X.lost_bound(s)) c.bad.insert(s);
    auto it = X.blocks.find(p);
    if (it != X.blocks.end())
        for (auto& [st, m] : it->second) c.add(st.first, st.second, m);
    c.scale = c.max_abs();
    return c;
}

// coefficient of A at power pa composed after B at power pb: A_pa * B_pb
inline Coeff compose(MatCurrent const& A, int pa, MatCurrent const& B, int pb) {
    Coeff c; c.sp = A.sp;
    auto ita = A.blocks.find(pa);
    auto itb = B.blocks.find(pb);
    // contamination scan: every source of B is suspect if B lost at pb, or if
    // any reached middle slice has lost image in A at pa
    int ns = (int)B.sp->slices.size();
    for (int s = 0; s < ns; ++s)
        if (pb >= B.lost_bound(s)) c.bad.insert(s);
    if (itb != B.blocks.end())
        for (auto& [st, mb] : itb->second) {
            int src = st.first, mid = st.second;
            if (pa >= A.lost_bound(mid)) c.bad.insert(src);
            if (ita == A.blocks.end()) continue;
            for (auto& [st2, ma] : ita->second) {
                if (st2.first != mid) continue;
                c.add(src, st2.second, ma * mb);
            }
        }
    c.scale = c.max_abs();
    return c;
}

// max |LHS - RHS| over blocks whose source is clean in both
struct CompareResult {
    double residual = 0;
    int clean = 0, contaminated = 0;
};
inline CompareResult compare(Coeff const& L, Coeff const& R) {
    CompareResult rr;
    std::set<int> bad = L.bad;
    bad.insert(R.bad.begin(), R.bad.end());
    std::set<std::pair<int, int>> keys;
    for (auto& [st, m] : L.m) keys.insert(st);
    for (auto& [st, m] : R.m) keys.insert(st);
    for (auto& st : keys) {
        if (bad.count(st.first)) { rr.contaminated++; continue; }
        rr.clean++;
        auto a = L.m.find(st), b = R.m.find(st);
        if (a != L.m.end() && b != R.m.end()) {
            Mat d = a->second;
            d.axpy(cplx(-1), b->second);
            rr.residual = std::max(rr.residual, d.max_abs());
        } else if (a != L.m.end()) {
            rr.residual = std::max(rr.residual, a->second.max_abs());
        } else {
            rr.residual = std::max(rr.residual, b->second.max_abs());
        }
    }
    return rr;
}

// residual normalized by the largest term that entered either side
inline CompareResult compare_rel(Coeff const& L, Coeff const& R) {
    CompareResult rr = compare(L, R);
    double sc = std::max({1.0, L.scale, L.max_abs(), R.scale, R.max_abs()});
    rr.residual /= sc;
    return rr;
}

} // namespace toroidal
