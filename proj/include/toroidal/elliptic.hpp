#pragma once
// Elliptic dynamical 4x4 R-matrix, the dynamical screening weight, and the
// scalar exchange kernels rho used by the screened-intertwiner checks.
// All functions take the additive variable u (z = q1^u) so fractional powers of z
// ride on the fixed log branch.

#include <array>
#include <complex>

#include "toroidal/qfunc.hpp"

namespace toroidal {

// f(z; beta, P) = [u + P + (1-beta)/2] / [u + (1+beta)/2], z = q1^u
template <class C>
C dynamical_weight(BasicParams<C> const& p, C u, C beta, C P) {
    using real = typename C::value_type;
    C num = theta_bracket(p, u + P + (C(1) - beta) / real(2));
    C den = theta_bracket(p, u + (C(1) + beta) / real(2));
    return num / den;
}

// basis order: (++, +-, -+, --)
template <class C>
std::array<std::array<C, 4>, 4> elliptic_R(BasicParams<C> const& p, C u, C beta, C P) {
    auto br = [&](C v) { return theta_bracket(p, v); };
    std::array<std::array<C, 4>, 4> R{};
    R[0][0] = C(1);
    R[3][3] = C(1);
    C dU = br(u + beta);
    R[1][1] = br(u + P) / dU * br(beta) / br(P);
    R[1][2] = br(u) / dU * br(beta + P) / br(P);
    R[2][1] = br(u) / dU * br(beta - P) / br(-P);
    R[2][2] = br(u - P) / dU * br(beta) / br(-P);
    return R;
}

template <class C>
std::array<std::array<C, 4>, 4> mat4_mul(std::array<std::array<C, 4>, 4> const& A,
                                         std::array<std::array<C, 4>, 4> const& B) {
    std::array<std::array<C, 4>, 4> M{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) M[i][j] += A[i][k] * B[k][j];
    return M;
}

// rho(z) = z^beta (q1 z, q1^{1-beta}/z; q1)_inf / (q1^{1-beta} z, q1/z; q1)_inf
template <class C>
C rho_kernel(BasicParams<C> const& p, C u, C beta) {
    using std::exp;
    C z = exp(u * p.log_q1);
    C zb = exp(beta * u * p.log_q1);
    C qb = exp((C(1) - beta) * p.log_q1); // q1^{1-beta}
    auto poch = [&](C x) { return qpoch_inf(x, p.q1, p.tol); };
    return zb * poch(p.q1 * z) * poch(qb / z) / (poch(qb * z) * poch(p.q1 / z));
}

// rho*(z) = z^beta (q1^beta z, 1/z; q1)_inf / (z, q1^beta/z; q1)_inf
template <class C>
C rho_star_kernel(BasicParams<C> const& p, C u, C beta) {
    using std::exp;
    C z = exp(u * p.log_q1);
    C zb = exp(beta * u * p.log_q1);
    C qb = exp(beta * p.log_q1); // q1^beta
    auto poch = [&](C x) { return qpoch_inf(x, p.q1, p.tol); };
    return zb * poch(qb * z) * poch(C(1) / z) / (poch(z) * poch(qb / z));
}

// checked kernels: rho_check has the rho* shape with beta_check, and vice versa
template <class C>
C rho_check_kernel(BasicParams<C> const& p, C u, C beta_check) {
    return rho_star_kernel(p, u, beta_check);
}
template <class C>
C rho_check_star_kernel(BasicParams<C> const& p, C u, C beta_check) {
    return rho_kernel(p, u, beta_check);
}

} // namespace toroidal
