#pragma once

#include <map>
#include <ostream>
#include <vector>

#include "uclab/engine.hpp"
#include "uclab/report.hpp"
#include "uclab/scalar.hpp"

namespace uclab {

// Coefficients are held in extended precision; the induction cancels terms of size up to ~1e7.
using lcplx = std::complex<long double>;

// f(r) = c1 r + c2 log r + sum_{k >= 3} c_k r^(2-k).
struct LaurentExpansion {
    lcplx c_linear{};
    lcplx c_log{};
    std::map<int, lcplx> c_neg;
    int n_dim = 2;
    int order = 1;  // m: highest coefficient index in use

    cplx value(double r) const;
    cplx d1(double r) const;
    cplx d2(double r) const;
};

// Residual coefficients d_p of ((n-1)/r) f' + f'' + f'^2 + lambda = sum d_p r^(-p).
using ResidualCoeffs = std::map<int, lcplx>;

cplx residual_value(const ResidualCoeffs& d, double r);

// Decaying root of c^2 = -lambda; lambda on the closed positive real axis is rejected.
cplx decaying_root(const Eigenvalue& lam);

std::pair<LaurentExpansion, ResidualCoeffs> base_f1(const Eigenvalue& lam, int n_dim);
// f1 -> f2 with c2 = -(n-1)/2.
std::pair<LaurentExpansion, ResidualCoeffs> base_f2(const Eigenvalue& lam, int n_dim);

// Exact coefficient arithmetic. Zero-power coefficient is checked against rel_tol |lambda|.
ResidualCoeffs residual_laurent(const LaurentExpansion& f, const Eigenvalue& lam, double rel_tol = 1e-12);

// f_m -> f_{m+1} with c_{m+1} = d_m / (2 (m-1) c1). Requires m >= 2.
std::pair<LaurentExpansion, ResidualCoeffs> extend(const LaurentExpansion& f, const ResidualCoeffs& d,
                                                   const Eigenvalue& lam);

// Runs the induction up to order m.
std::pair<LaurentExpansion, ResidualCoeffs> laurent_to_order(int m, const Eigenvalue& lam, int n_dim = 2);

struct RadialOptions {
    int n_dim = 2;
    double truncation_factor = 20.0;
};

struct RadialSolution {
    CaseKindVW kind = CaseKindVW::Vcase;
    Eigenvalue lambda;
    int m = 1;
    int n_dim = 2;
    LaurentExpansion f;
    ResidualCoeffs d;
    double R_m = 1.0, C_m = 0.0, r_max = 20.0;
    cplx log_C{};  // W-case inner constant, log C

    // log u(r), and d/dr, d2/dr2 of log u.
    cplx log_u(double r) const;
    cplx dlog_u(double r) const;
    cplx d2log_u(double r) const;
    cplx V(double r) const;  // Vcase potential
    cplx W(double r) const;  // Wcase radial component, W = w(r) (cos phi, sin phi)

    void write_coefficients_csv(std::ostream& os) const;
    void write_profile_csv(std::ostream& os, int samples = 400) const;
};

RadialSolution assemble(int m, const Eigenvalue& lam, const PotentialDecay& decay, CaseKindVW kind,
                        const RadialOptions& opt = {});
// m = ceil(N) (V) or ceil(P) (W) from the decay data.
RadialSolution assemble(const Eigenvalue& lam, const PotentialDecay& decay, CaseKindVW kind,
                        const RadialOptions& opt = {});

// Finite-difference residual of Delta u + lambda u - V u - W u_r relative to |Delta u| + |lambda u|.
double radial_fd_residual(const RadialSolution& s, double r, double h = 1e-2);

VerificationReport verify_radial(const RadialSolution& s, double decay_rate);

}  // namespace uclab
