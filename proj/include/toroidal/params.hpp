#pragma once
// Parameter bookkeeping for the three-parameter torus q1*q2*q3 = 1 and the
// glued (checked) family derived from it.  All fractional powers are taken
// through fixed logarithm branches stored here, never through fresh calls
// to log() on derived quantities.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

using cplx = std::complex<double>;

// Half-integers carried as doubled integers. h(3) means 3/2.
struct Half {
    int twice = 0;
    Half() = default;
    explicit Half(int t) : twice(t) {}
    static Half whole(int n) { return Half(2 * n); }
    bool is_integer() const { return twice % 2 == 0; }
    double value() const { return 0.5 * twice; }
    Half operator+(Half o) const { return Half(twice + o.twice); }
    Half operator-(Half o) const { return Half(twice - o.twice); }
    Half operator-() const { return Half(-twice); }
    bool operator==(Half o) const { return twice == o.twice; }
    auto operator<=>(Half const& o) const = default;
};

inline std::string to_string(Half h) {
    if (h.is_integer()) return std::to_string(h.twice / 2);
    return std::to_string(h.twice) + "/2";
}

template <class C>
struct BasicParams {
    using scalar = C;
    using real = typename C::value_type;

    C log_q1{}, log_q2{}, log_q3{};
    C q1{}, q2{}, q3{};
    C s1{}, s2{}, s3{};
    C beta{};
    int M = 0;

    // checked family (depends on M)
    C log_qc1{}, log_qc2{}, log_qc3{};
    C qc1{}, qc2{}, qc3{};
    C sc1{}, sc2{}, sc3{};
    C beta_check{};

    real tol = real(1e-11);
    int genericity_bound = 24;

    C q1_pow(C e) const { using std::exp; return exp(e * log_q1); }
    C q1_pow(Half h) const { return q1_pow(C(real(h.twice) / real(2))); }
    C s1_pow(C e) const { using std::exp; return exp(e * log_q1 / real(2)); }
    C qc1_pow(C e) const { using std::exp; return exp(e * log_qc1); }
    C qc1_pow(Half h) const { return qc1_pow(C(real(h.twice) / real(2))); }

    // kappa_r = (1-q1^r)(1-q2^r)(1-q3^r)
    C kappa(int r) const {
        using std::pow;
        C a = ipow(q1, r), b = ipow(q2, r), c = ipow(q3, r);
        return (C(1) - a) * (C(1) - b) * (C(1) - c);
    }
    C kappa_check(int r) const {
        C a = ipow(qc1, r), b = ipow(qc2, r), c = ipow(qc3, r);
        return (C(1) - a) * (C(1) - b) * (C(1) - c);
    }

    static C ipow(C x, long n) {
        if (n < 0) return C(1) / ipow(x, -n);
        C r(1);
        while (n) { if (n & 1) r *= x; x *= x; n >>= 1; }
        return r;
    }

    // mirrored context: swaps the roles of base and checked family
    // (used by the swap-check automorphism).
    BasicParams mirrored() const {
        BasicParams p = *this;
        std::swap(p.log_q1, p.log_qc1); std::swap(p.log_q2, p.log_qc2);
        std::swap(p.log_q3, p.log_qc3);
        std::swap(p.q1, p.qc1); std::swap(p.q2, p.qc2); std::swap(p.q3, p.qc3);
        std::swap(p.s1, p.sc1); std::swap(p.s2, p.sc2); std::swap(p.s3, p.sc3);
        std::swap(p.beta, p.beta_check);
        return p;
    }

    // q2<->q3 swap with M -> -M (the M-negation automorphism).
    BasicParams m_negated() const {
        return make(log_q1, log_q3, -M, tol, genericity_bound, false);
    }

    static BasicParams make(C log_q1_, C log_q2_, int M_, real tol_,
                            int gbound = 24, bool validate = true) {
        using std::abs; using std::exp;
        BasicParams p;
        p.tol = tol_;
        p.genericity_bound = gbound;
        p.M = M_;
        p.log_q1 = log_q1_;
        p.log_q2 = log_q2_;
        p.log_q3 = -(log_q1_ + log_q2_);
        p.q1 = exp(p.log_q1); p.q2 = exp(p.log_q2); p.q3 = exp(p.log_q3);
        p.s1 = exp(p.log_q1 / real(2));
        p.s2 = exp(p.log_q2 / real(2));
        p.s3 = exp(p.log_q3 / real(2));
        p.beta = -p.log_q3 / p.log_q1;

        p.log_qc1 = -p.log_q1;
        p.log_qc2 = p.log_q2 + C(real(1 - M_)) * p.log_q1;
        p.log_qc3 = -(p.log_qc1 + p.log_qc2);
        p.qc1 = exp(p.log_qc1); p.qc2 = exp(p.log_qc2); p.qc3 = exp(p.log_qc3);
        p.sc1 = exp(p.log_qc1 / real(2));
        p.sc2 = exp(p.log_qc2 / real(2));
        p.sc3 = exp(p.log_qc3 / real(2));
        p.beta_check = C(real(M_ + 1)) - p.beta;

        if (validate) p.validate();
        return p;
    }

    void validate() const {
        using std::abs;
        real t = tol;
        if (abs(q1 * q2 * q3 - C(1)) > t) throw std::runtime_error("q1 q2 q3 != 1");
        if (abs(log_q1 + log_q2 + log_q3) > real(0)) throw std::runtime_error("log branches do not cancel exactly");
        if (!(abs(q1) < real(1))) throw std::runtime_error("|q1| must be < 1");
        if (abs(qc1 * q1 - C(1)) > t) throw std::runtime_error("qc1 != 1/q1");
        if (abs(qc2 - q2 * ipow(q1, 1 - M)) > t * real(100)) throw std::runtime_error("qc2 tie violated");
        if (abs(qc3 - q3 * ipow(q1, M + 1)) > t * real(100)) throw std::runtime_error("qc3 tie violated");
        if (abs(beta + beta_check - C(real(M + 1))) > t) throw std::runtime_error("beta + beta_check != M+1");
        if (abs(-log_qc3 / log_qc1 - beta_check) > t) throw std::runtime_error("beta_check log mismatch");
        // genericity: no small q-lattice point q1^a q2^b = 1 in the scan box
        for (int a = -genericity_bound; a <= genericity_bound; ++a)
            for (int b = -genericity_bound; b <= genericity_bound; ++b) {
                if (a == 0 && b == 0) continue;
                if (std::abs(a) + std::abs(b) > genericity_bound) continue;
                if (abs(ipow(q1, a) * ipow(q2, b) - C(1)) <= t)
                    throw std::runtime_error("parameters fail genericity at q1^" +
                                             std::to_string(a) + " q2^" + std::to_string(b));
            }
    }
};

using Params = BasicParams<cplx>;

// Default generic test point: |q1|<1, |q2| slightly above 1, generic phases.
inline Params default_params(int M, double tol = 1e-11) {
    cplx q1(0.58, 0.11);
    cplx q2 = 1.1 * std::exp(cplx(0, 0.7431));
    return Params::make(std::log(q1), std::log(q2), M, tol);
}

} // namespace toroidal
