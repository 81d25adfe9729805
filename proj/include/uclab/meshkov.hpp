#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "uclab/jet.hpp"
#include "uclab/report.hpp"
#include "uclab/scalar.hpp"
#include "uclab/smoothstep.hpp"

namespace uclab {

// A construction bound failed; the message names it.
struct GuardFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnnulusSpec {
    double rho = 0.0;
    double beta0 = 0.0;
    double alpha = 0.0;  // 1 - beta0/2
    int n = 0, k = 0;
    Eigenvalue lambda;
    CaseKindVW kind = CaseKindVW::Vcase;

    // rho + x rho^alpha
    double at(double x) const;
    // Distance of n, k from the hypothesis centres, and the allowed slack (1 and 10 or 40).
    double n_defect() const;
    double k_defect() const;
    double k_slack() const { return kind == CaseKindVW::Vcase ? 10.0 : 40.0; }
};

// rho^beta0 / log rho (V) or rho^beta0 (W).
double n_target(double rho, double beta0, CaseKindVW kind);
int n_of_rho(double rho, double beta0, CaseKindVW kind);
double k_target(double rho, double beta0, CaseKindVW kind);

struct NK {
    int n = 0, k = 0;
};

inline constexpr double kDefaultRhoFloor = 50.0;

// n = floor(target(rho)), k = n(rho + 6 rho^alpha) - n(rho). Throws GuardFailure below the floor
// or when the hypothesis bounds on n, k fail.
NK choose_nk(double rho, double beta0, CaseKindVW kind, double rho_floor = kDefaultRhoFloor);

// Periodic angular profile: f = -4k on the outer fifths of each period T = pi/(n+k), smooth
// ramps to a plateau 4k in between, Phi its antiderivative.
class PhaseProfile {
public:
    PhaseProfile() = default;
    PhaseProfile(int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }
    double period() const { return T_; }
    double plateau() const { return 4.0 * k_; }

    Step f(double phi) const;  // f, f', f''
    double Phi(double phi) const;
    double F(double phi) const { return (n_ + 2.0 * k_) * phi + Phi(phi); }
    double S(double phi) const { return F(phi) + n_ * phi; }
    // Jets of F and Phi at phi + dphi; integer multiples of phi are reduced mod 2 pi before dphi is
    // added, so stencils around a large phi keep their relative precision.
    Jet F_jet(double phi, double dphi = 0.0) const;
    Jet Phi_jet(double phi, double dphi = 0.0) const;
    // sup |f'| T / k
    double slope_constant() const;

private:
    int n_ = 0, k_ = 0;
    double T_ = 0.0;
    double local(double phi) const;
};

// Jet of m (phi + dphi) for integer m, reduced mod 2 pi.
Jet angle_mode(int m, double phi, double dphi = 0.0);

// Requires 2n >= 5k, which keeps S inside the sectors pi/7 away from multiples of 2 pi.
PhaseProfile build_phase(int n, int k);

enum class SubAnnulus { Cap, S1A, S1C, S1B, S2, S3, S4A, S4C, S4B };
const char* sub_name(SubAnnulus s);

// Measured construction margins of one annulus (all should be positive).
struct AnnulusGuards {
    double C_uBd1 = 0.0, C_uBd2 = 0.0, C_uBd3 = 0.0, C_uBd4 = 0.0;
    double g_max = 0.0, C_g = 0.0;  // sup |g| (<= 1) and -log inf |g| on step 3
    double match_defect = 0.0;      // | log|u1| - log|u2| | at rho + rho^alpha
    double im_q_sup = 0.0;          // sup |Im q| on the 1C annulus
};

struct Annulus {
    AnnulusSpec spec;
    PhaseProfile phase;
    cplx log_b{}, log_d{}, log_b1{}, log_a{};
    cplx log_gain{};  // log of the product of a_i over earlier annuli
    AnnulusGuards guards;

    double r0() const { return spec.rho; }
    double r1() const { return spec.at(6.0); }
    SubAnnulus locate(double r) const;
};

struct MeshkovOptions {
    CaseKindVW kind = CaseKindVW::Vcase;
    Eigenvalue lambda;
    double beta0 = 0.0;  // 0 selects 4/3 (V) or 3/2 (W)
    double rho1 = 100.0;
    int annuli = 3;
    double rho_floor = kDefaultRhoFloor;
};

double default_beta0(CaseKindVW kind);

// Value scaled by exp(-log_scale).
struct Scaled {
    cplx value{};
    double log_scale = 0.0;
};

class PiecewiseSolution {
public:
    CaseKindVW kind = CaseKindVW::Vcase;
    Eigenvalue lambda;
    double beta0 = 0.0;
    double rho1 = 0.0;
    int n1 = 0;
    std::vector<Annulus> annuli;

    // N = 2 - 3 beta0/2 (V) or P = 1 - beta0/2 (W).
    double decay_rate() const;
    double r_max() const { return annuli.back().r1(); }

    // Annulus index for r (-1 for the inner cap).
    int annulus_index(double r) const;
    SubAnnulus locate(double r) const;

    // log M(r) and d/dr log M, the piecewise comparison modulus (with gluing factors).
    std::pair<double, double> log_M(double r) const;

    // u exp(-Lref) as a jet in (r, phi) at angle phi + dphi.
    Jet eval_jet(double r, double phi, double Lref, double dphi = 0.0) const;
    // Same with the formula of a given annulus / sub-annulus (for seam checks).
    Jet eval_piece(int annulus, SubAnnulus sub, double r, double phi, double Lref, double dphi = 0.0) const;

    Scaled eval_u(double r, double phi) const;
    // (u_x, u_y) scaled by the same factor as eval_u.
    std::array<cplx, 2> eval_grad_u(double r, double phi) const;

    // V (Vcase) or the zero vector / W (Wcase).
    cplx potential_V(double r, double phi) const;
    std::array<cplx, 2> potential_W(double r, double phi) const;
    // |potential| in the relevant norm.
    double potential_abs(double r, double phi) const;

    // Fourth-order FD residual of Delta u + lambda u - V u - W.grad u over the local scale
    // |u_rr| + |u_r|/r + |u_pp|/r^2 + |lambda u|.
    double fd_residual(double r, double phi, double h_r, double h_phi) const;
    // Default steps at r.
    std::pair<double, double> fd_steps(double r) const;

    nlohmann::json constants_json() const;
    void write_fields_csv(std::ostream& os, int nr, int nphi) const;

private:
    struct Pieces {
        Jet u, a, b;
    };
    Pieces pieces(int annulus, SubAnnulus sub, double r, double phi, double Lref, double dphi = 0.0) const;
    Jet cap_jet(double r, double phi, double Lref, double dphi = 0.0) const;
};

PiecewiseSolution build_meshkov(const MeshkovOptions& opt);

struct MeshkovCheckOptions {
    int residual_points = 10000;
    int continuity_phi = 720;
    int decay_radii = 40;  // per annulus
    std::uint64_t seed = 1;
    double fit_window = 0.15;
};

// Continuity, FD residual, potential decay, ratio guards, sector bounds and decay.
VerificationReport verify_meshkov(const PiecewiseSolution& sol, const MeshkovCheckOptions& opt = {});

struct DecayProfile {
    std::vector<double> r, log_m, log_M;
};
DecayProfile sample_decay(const PiecewiseSolution& sol, int radii_per_annulus);

// Least-squares exponent p in -log m(r) = A + c r^p (W) or A + c r^p / log r (V).
struct DecayFit {
    double p = 0.0, c = 0.0, A = 0.0, rms = 0.0;
};
DecayFit fit_decay_exponent(const DecayProfile& d, CaseKindVW kind);

VerificationReport verify_decay(const PiecewiseSolution& sol, int radii_per_annulus, double fit_window = 0.15);

// q(r) = r^(-2k) mu_n / (b mu_(n-2k)); sup of |Im q| over [rho + 2/3 rho^a, rho + 4/3 rho^a].
double im_part_sup(const AnnulusSpec& spec, int samples = 400);

struct ImPartSweep {
    std::vector<int> n;
    std::vector<double> rho, sup_im, scaled;  // scaled = sup_im * n
    double slope = 0.0;                       // of log sup_im against log n
    double spread = 0.0;                      // max/min of scaled
};
// V-case annuli with rho solving the n hypothesis exactly and k at its centre.
ImPartSweep im_part_sweep(const std::vector<int>& ns, double beta0, const Eigenvalue& lam);

VerificationReport im_part_check(const AnnulusSpec& spec, int samples = 400);

}  // namespace uclab
