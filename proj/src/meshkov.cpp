#include "uclab/meshkov.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>

#include "uclab/parallel.hpp"

namespace uclab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

Jet log_r_jet(double r) { return Jet::radial(std::log(r), 1.0 / r, -1.0 / (r * r)); }
Jet step_jet(const Step& s) { return Jet::radial(s.v, s.d1, s.d2); }
Jet lmu_jet(double n, const Eigenvalue& lam, double r) { return log_mu(n, lam, r).jet(); }
Jet phi_jet(double a, double b, const Eigenvalue& lam, double r) { return phi_ab_jet(a, b, lam, r).jet(); }
cplx lmu(double n, const Eigenvalue& lam, double r) { return log_mu(n, lam, r).f; }

bool is_step1(SubAnnulus s) { return s == SubAnnulus::S1A || s == SubAnnulus::S1C || s == SubAnnulus::S1B; }

cplx helmholtz(const Jet& u, double r, const Eigenvalue& lam) { return laplacian(u, r) + lam.value * u.v; }

}  // namespace

double AnnulusSpec::at(double x) const { return rho + x * std::pow(rho, alpha); }

double n_target(double rho, double beta0, CaseKindVW kind) {
    const double p = std::pow(rho, beta0);
    return kind == CaseKindVW::Vcase ? p / std::log(rho) : p;
}

int n_of_rho(double rho, double beta0, CaseKindVW kind) {
    return static_cast<int>(std::floor(n_target(rho, beta0, kind)));
}

double k_target(double rho, double beta0, CaseKindVW kind) {
    const double L = std::log(rho);
    if (kind == CaseKindVW::Vcase) return 6.0 * (beta0 - 1.0 / L) * std::pow(rho, beta0 / 2.0) / L;
    return 6.0 * beta0 * std::pow(rho, beta0 / 2.0);
}

double AnnulusSpec::n_defect() const { return std::abs(n - n_target(rho, beta0, kind)); }
double AnnulusSpec::k_defect() const { return std::abs(k - k_target(rho, beta0, kind)); }

NK choose_nk(double rho, double beta0, CaseKindVW kind, double rho_floor) {
    if (!(beta0 > 1.0)) throw DomainError("choose_nk: beta0 must exceed 1");
    if (!(rho >= rho_floor))
        throw GuardFailure("choose_nk: rho = " + std::to_string(rho) + " below the floor " + std::to_string(rho_floor));
    const double alpha = 1.0 - beta0 / 2.0;
    NK out;
    out.n = n_of_rho(rho, beta0, kind);
    out.k = n_of_rho(rho + 6.0 * std::pow(rho, alpha), beta0, kind) - out.n;
    AnnulusSpec s;
    s.rho = rho;
    s.beta0 = beta0;
    s.alpha = alpha;
    s.kind = kind;
    s.n = out.n;
    s.k = out.k;
    if (out.n < 1 || out.k < 1) throw GuardFailure("choose_nk: n or k below 1 (rho too small)");
    if (s.n_defect() > 1.0) throw GuardFailure("choose_nk: |n - target| > 1");
    if (s.k_defect() > s.k_slack())
        throw GuardFailure("choose_nk: |k - target| = " + std::to_string(s.k_defect()) + " exceeds " +
                           std::to_string(s.k_slack()) + " (rho too small)");
    return out;
}

PhaseProfile::PhaseProfile(int n, int k) : n_(n), k_(k), T_(kPi / (n + k)) {}

double PhaseProfile::local(double phi) const {
    double t = std::fmod(phi, T_);
    if (t < 0.0) t += T_;
    return t;
}

Step PhaseProfile::f(double phi) const {
    const double t = local(phi);
    const Step up = ramp_up(t, 0.2 * T_, 0.3 * T_);
    const Step down = ramp_up(t, 0.7 * T_, 0.8 * T_);
    const double h = 8.0 * k_;
    return {-4.0 * k_ + h * (up.v - down.v), h * (up.d1 - down.d1), h * (up.d2 - down.d2)};
}

namespace {
// Integral over [0, t] of ramp_up(., a, b).
double ramp_integral(double t, double a, double b) {
    if (t <= a) return 0.0;
    const double w = b - a;
    if (t >= b) return 0.5 * w + (t - b);
    return w * smooth_step_integral((t - a) / w);
}
}  // namespace

double PhaseProfile::Phi(double phi) const {
    const double t = local(phi);
    const double h = 8.0 * k_;
    return -4.0 * k_ * t + h * (ramp_integral(t, 0.2 * T_, 0.3 * T_) - ramp_integral(t, 0.7 * T_, 0.8 * T_));
}

Jet angle_mode(int m, double phi, double dphi) {
    return Jet::angular(std::remainder(m * phi, 2.0 * kPi) + m * dphi, double(m), 0.0);
}

Jet PhaseProfile::Phi_jet(double phi, double dphi) const {
    const double t = local(phi) + dphi;
    const Step s = f(t);
    return Jet::angular(Phi(t), s.v, s.d1);
}

Jet PhaseProfile::F_jet(double phi, double dphi) const { return angle_mode(n_ + 2 * k_, phi, dphi) + Phi_jet(phi, dphi); }

double PhaseProfile::slope_constant() const {
    double m = 0.0;
    for (int i = 0; i <= 2000; ++i) m = std::max(m, std::abs(f(T_ * i / 2000.0).d1));
    return m * T_ / k_;
}

PhaseProfile build_phase(int n, int k) {
    if (n < 1 || k < 1) throw GuardFailure("build_phase: n and k must be positive");
    if (2 * n < 5 * k)
        throw GuardFailure("build_phase: 2n >= 5k fails (n = " + std::to_string(n) + ", k = " + std::to_string(k) +
                           "); the sector bound S in [2 pi m + pi/7, 2 pi (m+1) - pi/7] is lost");
    return PhaseProfile(n, k);
}

const char* sub_name(SubAnnulus s) {
    switch (s) {
        case SubAnnulus::Cap: return "cap";
        case SubAnnulus::S1A: return "1A";
        case SubAnnulus::S1C: return "1C";
        case SubAnnulus::S1B: return "1B";
        case SubAnnulus::S2: return "2";
        case SubAnnulus::S3: return "3";
        case SubAnnulus::S4A: return "4A";
        case SubAnnulus::S4C: return "4C";
        case SubAnnulus::S4B: return "4B";
    }
    return "?";
}

SubAnnulus Annulus::locate(double r) const {
    const auto& s = spec;
    if (r < s.at(2.0 / 3.0)) return SubAnnulus::S1A;
    if (r < s.at(4.0 / 3.0)) return SubAnnulus::S1C;
    if (r < s.at(2.0)) return SubAnnulus::S1B;
    if (r < s.at(3.0)) return SubAnnulus::S2;
    if (r < s.at(4.0)) return SubAnnulus::S3;
    if (r < s.at(14.0 / 3.0)) return SubAnnulus::S4A;
    if (r < s.at(16.0 / 3.0)) return SubAnnulus::S4C;
    return SubAnnulus::S4B;
}

double default_beta0(CaseKindVW kind) { return kind == CaseKindVW::Vcase ? 4.0 / 3.0 : 1.5; }

namespace {

double max_over(double a, double b, int samples, const std::function<double(double)>& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) m = std::max(m, f(a + (b - a) * i / samples));
    return m;
}

AnnulusGuards measure_guards(const Annulus& A) {
    const auto& s = A.spec;
    const int n = s.n, k = s.k;
    const auto& lam = s.lambda;
    AnnulusGuards g;
    auto log_u2_over_u1 = [&](double r) {
        return (A.log_b + 2.0 * k * std::log(r) + lmu(n - 2 * k, lam, r) - lmu(n, lam, r)).real();
    };
    auto log_u5_over_u4 = [&](double r) {
        return (A.log_a - A.log_b1 + k * std::log(r) + lmu(n + k, lam, r) - lmu(n + 2 * k, lam, r)).real();
    };
    g.C_uBd1 = -max_over(s.at(0.0), s.at(2.0 / 3.0), 200, log_u2_over_u1);
    g.C_uBd2 = -max_over(s.at(4.0 / 3.0), s.at(2.0), 200, [&](double r) { return -log_u2_over_u1(r); });
    g.C_uBd3 = -max_over(s.at(4.0), s.at(14.0 / 3.0), 200, log_u5_over_u4);
    g.C_uBd4 = -max_over(s.at(16.0 / 3.0), s.at(6.0), 200, [&](double r) { return -log_u5_over_u4(r); });
    auto log_abs_g = [&](double r) {
        return (A.log_d - 4.0 * k * std::log(r) + lmu(n + 2 * k, lam, r) - lmu(n - 2 * k, lam, r)).real();
    };
    g.g_max = std::exp(max_over(s.at(3.0), s.at(4.0), 200, log_abs_g));
    g.C_g = max_over(s.at(3.0), s.at(4.0), 200, [&](double r) { return -log_abs_g(r); });
    g.match_defect = std::abs(log_u2_over_u1(s.at(1.0)));
    g.im_q_sup = s.kind == CaseKindVW::Vcase ? im_part_sup(s, 200) : 0.0;
    return g;
}

}  // namespace

PiecewiseSolution build_meshkov(const MeshkovOptions& opt) {
    const double beta0 = opt.beta0 > 0.0 ? opt.beta0 : default_beta0(opt.kind);
    if (!(beta0 > 1.0)) throw DomainError("meshkov: beta0 must exceed 1");
    if (opt.kind == CaseKindVW::Vcase && beta0 > 4.0 / 3.0 + 1e-12)
        throw DomainError("meshkov: V case needs beta0 = (4 - 2N)/3 <= 4/3 (N >= 0)");
    if (opt.kind == CaseKindVW::Wcase && beta0 > 2.0 + 1e-12)
        throw DomainError("meshkov: W case needs beta0 = 2 - 2P <= 2 (P >= 0)");
    if (opt.annuli < 1) throw DomainError("meshkov: at least one annulus");

    PiecewiseSolution sol;
    sol.kind = opt.kind;
    sol.lambda = opt.lambda;
    sol.beta0 = beta0;
    sol.rho1 = opt.rho1;
    const double alpha = 1.0 - beta0 / 2.0;

    std::vector<double> rho(opt.annuli + 1);
    rho[0] = opt.rho1;
    for (int j = 0; j < opt.annuli; ++j) rho[j + 1] = rho[j] + 6.0 * std::pow(rho[j], alpha);

    cplx gain{};
    for (int j = 0; j < opt.annuli; ++j) {
        const NK nk = choose_nk(rho[j], beta0, opt.kind, opt.rho_floor);
        Annulus A;
        A.spec.rho = rho[j];
        A.spec.beta0 = beta0;
        A.spec.alpha = alpha;
        A.spec.n = nk.n;
        A.spec.k = nk.k;
        A.spec.lambda = opt.lambda;
        A.spec.kind = opt.kind;
        A.phase = build_phase(nk.n, nk.k);
        const int n = nk.n, k = nk.k;
        const auto& lam = opt.lambda;
        try {
            const double R1 = A.spec.at(1.0), R3 = A.spec.at(3.0), R5 = A.spec.at(5.0);
            A.log_b = -2.0 * k * std::log(R1) + lmu(n, lam, R1) - lmu(n - 2 * k, lam, R1);
            A.log_d = 4.0 * k * std::log(R3) + lmu(n - 2 * k, lam, R3) - lmu(n + 2 * k, lam, R3);
            A.log_b1 = A.log_b + A.log_d;
            A.log_a = A.log_b1 - k * std::log(R5) + lmu(n + 2 * k, lam, R5) - lmu(n + k, lam, R5);
            A.log_gain = gain;
            A.guards = measure_guards(A);
            // Touch the full radial range once so branch problems surface at build time.
            for (int i = 0; i <= 60; ++i) {
                const double r = A.spec.at(6.0 * i / 60.0);
                (void)lmu(n - 2 * k, lam, r);
                (void)lmu(n + 2 * k, lam, r);
                if (opt.kind == CaseKindVW::Vcase) {
                    (void)phi_ab(n, n - 2 * k, lam, r);
                    (void)phi_ab(n + k, n + 2 * k, lam, r);
                }
            }
        } catch (const DomainError& e) {
            throw GuardFailure(std::string("meshkov: ") + e.what());
        }
        const auto& g = A.guards;
        auto need = [&](bool ok, const std::string& what) {
            if (!ok) throw GuardFailure("meshkov annulus " + std::to_string(j + 1) + ": " + what);
        };
        need(g.C_uBd1 > 0.0, "|u2/u1| <= e^-C on [rho, rho + 2/3 rho^a] fails (C = " + std::to_string(g.C_uBd1) + ")");
        need(g.C_uBd2 > 0.0, "|u2/u1| >= e^C on [rho + 4/3 rho^a, rho + 2 rho^a] fails");
        need(g.C_uBd3 > 0.0, "|u5/u4| <= e^-C on [rho + 4 rho^a, rho + 14/3 rho^a] fails");
        need(g.C_uBd4 > 0.0, "|u5/u4| >= e^C on [rho + 16/3 rho^a, rho + 6 rho^a] fails");
        need(g.g_max <= 1.0 + 1e-9, "amplitude swap |g| <= 1 fails");
        gain += A.log_a;
        sol.annuli.push_back(A);
    }
    sol.n1 = sol.annuli.front().spec.n;
    for (std::size_t j = 0; j + 1 < sol.annuli.size(); ++j) {
        const auto& a = sol.annuli[j].spec;
        if (sol.annuli[j + 1].spec.n != a.n + a.k) throw std::logic_error("meshkov: n_{j+1} != n_j + k_j");
    }
    return sol;
}

double PiecewiseSolution::decay_rate() const {
    return kind == CaseKindVW::Vcase ? 2.0 - 1.5 * beta0 : 1.0 - 0.5 * beta0;
}

int PiecewiseSolution::annulus_index(double r) const {
    if (!(r > 0.0) || r > r_max() * (1.0 + 1e-12)) throw DomainError("meshkov: r outside the built range");
    if (r < rho1) return -1;
    for (std::size_t j = 0; j < annuli.size(); ++j)
        if (r < annuli[j].r1()) return static_cast<int>(j);
    return static_cast<int>(annuli.size()) - 1;
}

SubAnnulus PiecewiseSolution::locate(double r) const {
    const int j = annulus_index(r);
    return j < 0 ? SubAnnulus::Cap : annuli[j].locate(r);
}

std::pair<double, double> PiecewiseSolution::log_M(double r) const {
    const int j = annulus_index(r);
    const auto& lam = lambda;
    const Jet lr = log_r_jet(r);
    Jet L;
    if (j < 0) {
        const Jet psi = step_jet(ramp_up(r, rho1 / 4.0, 0.75 * rho1));
        L = double(n1) * lr * (Jet(1.0) - 2.0 * psi) + lmu_jet(n1, lam, r);
    } else {
        const Annulus& A = annuli[j];
        const auto& s = A.spec;
        const double n = s.n, k = s.k;
        const bool V = kind == CaseKindVW::Vcase;
        if (r <= s.at(1.0)) {
            L = -n * lr + lmu_jet(n, lam, r);
            if (V) L += step_jet(ramp_up(r, s.at(0.1), s.at(1.0 / 3.0))) * phi_jet(n, n - 2 * k, lam, r);
        } else if (r <= s.at(2.0)) {
            L = Jet(A.log_b) + (2 * k - n) * lr + lmu_jet(n - 2 * k, lam, r);
            if (V) L += step_jet(ramp_down(r, s.at(5.0 / 3.0), s.at(1.9))) * phi_jet(n, n - 2 * k, lam, r);
        } else if (r <= s.at(3.0)) {
            L = Jet(A.log_b) + (2 * k - n) * lr + lmu_jet(n - 2 * k, lam, r);
        } else if (r <= s.at(4.0)) {
            const Jet psi = step_jet(ramp_down(r, s.at(10.0 / 3.0), s.at(11.0 / 3.0)));
            const Jet g = exp(Jet(A.log_d) - 4.0 * k * lr + lmu_jet(n + 2 * k, lam, r) - lmu_jet(n - 2 * k, lam, r));
            const Jet h = psi + (Jet(1.0) - psi) * g;
            L = Jet(A.log_b) + (2 * k - n) * lr + lmu_jet(n - 2 * k, lam, r) + log(h);
        } else if (r <= s.at(5.0)) {
            L = Jet(A.log_b1) - (n + 2 * k) * lr + lmu_jet(n + 2 * k, lam, r);
            if (V) L += step_jet(ramp_up(r, s.at(4.1), s.at(13.0 / 3.0))) * phi_jet(n + k, n + 2 * k, lam, r);
        } else {
            L = Jet(A.log_a) - (n + k) * lr + lmu_jet(n + k, lam, r);
            if (V) L += step_jet(ramp_down(r, s.at(17.0 / 3.0), s.at(5.9))) * phi_jet(n + k, n + 2 * k, lam, r);
        }
        L += Jet(A.log_gain);
    }
    return {L.v.real(), L.r.real()};
}

Jet PiecewiseSolution::cap_jet(double r, double phi, double Lref, double dphi) const {
    const Jet psi = step_jet(ramp_up(r, rho1 / 4.0, 0.75 * rho1));
    const Jet L = double(n1) * log_r_jet(r) * (Jet(1.0) - 2.0 * psi) + (-I) * angle_mode(n1, phi, dphi) +
                  lmu_jet(n1, lambda, r) + Jet(cplx(-Lref));
    return exp(L);
}

PiecewiseSolution::Pieces PiecewiseSolution::pieces(int j, SubAnnulus sub, double r, double phi, double Lref,
                                                    double dphi) const {
    if (j < 0 || sub == SubAnnulus::Cap) {
        const Jet u = cap_jet(r, phi, Lref, dphi);
        return {u, u, Jet()};
    }
    const Annulus& A = annuli[j];
    const auto& s = A.spec;
    const auto& lam = lambda;
    const double n = s.n, k = s.k;
    const bool V = kind == CaseKindVW::Vcase;
    const Jet lr = log_r_jet(r);
    const int ni = s.n, ki = s.k;
    const Jet shift(A.log_gain - Lref);
    const cplx ipi(0.0, kPi);
    auto term = [&](const Jet& L) { return exp(L + shift); };

    Pieces out;
    if (is_step1(sub)) {
        const Jet Lu1 = -n * lr + (-I) * angle_mode(ni, phi, dphi) + lmu_jet(n, lam, r);
        const Jet Lu2 =
            Jet(A.log_b + ipi) + (2 * k - n) * lr + I * A.phase.F_jet(phi, dphi) + lmu_jet(n - 2 * k, lam, r);
        const Jet psi1 = step_jet(ramp_down(r, s.at(4.0 / 3.0), s.at(5.0 / 3.0)));
        const Jet psi2 = step_jet(ramp_up(r, s.at(1.0 / 3.0), s.at(2.0 / 3.0)));
        if (V) {
            const Jet psi3 = step_jet(ramp_down(r, s.at(5.0 / 3.0), s.at(1.9)));
            const Jet psi4 = step_jet(ramp_up(r, s.at(0.1), s.at(1.0 / 3.0)));
            const Jet ph = phi_jet(n, n - 2 * k, lam, r);
            out.a = psi1 * term(Lu1 + psi4 * ph);
            out.b = psi2 * term(Lu2 + psi3 * ph);
        } else {
            out.a = psi1 * term(Lu1);
            out.b = psi2 * term(Lu2);
        }
        out.u = out.a + out.b;
    } else if (sub == SubAnnulus::S2) {
        const Jet psi = step_jet(ramp_down(r, s.at(7.0 / 3.0), s.at(8.0 / 3.0)));
        const Jet Phi = A.phase.Phi_jet(phi, dphi);
        const Jet L = Jet(A.log_b + ipi) + (2 * k - n) * lr + I * (psi * Phi + angle_mode(ni + 2 * ki, phi, dphi)) +
                      lmu_jet(n - 2 * k, lam, r);
        out.u = out.a = term(L);
    } else if (sub == SubAnnulus::S3) {
        const Jet psi = step_jet(ramp_down(r, s.at(10.0 / 3.0), s.at(11.0 / 3.0)));
        const Jet Lu3 =
            Jet(A.log_b + ipi) + (2 * k - n) * lr + I * angle_mode(ni + 2 * ki, phi, dphi) + lmu_jet(n - 2 * k, lam, r);
        const Jet g = exp(Jet(A.log_d) - 4.0 * k * lr + lmu_jet(n + 2 * k, lam, r) - lmu_jet(n - 2 * k, lam, r));
        const Jet h = psi + (Jet(1.0) - psi) * g;
        out.u = out.a = term(Lu3) * h;
    } else {
        const Jet Lu4 =
            Jet(A.log_b1 + ipi) - (n + 2 * k) * lr + I * angle_mode(ni + 2 * ki, phi, dphi) + lmu_jet(n + 2 * k, lam, r);
        const Jet Lu5 = Jet(A.log_a) - (n + k) * lr + (-I) * angle_mode(ni + ki, phi, dphi) + lmu_jet(n + k, lam, r);
        const Jet psi1 = step_jet(ramp_down(r, s.at(16.0 / 3.0), s.at(17.0 / 3.0)));
        const Jet psi2 = step_jet(ramp_up(r, s.at(13.0 / 3.0), s.at(14.0 / 3.0)));
        if (V) {
            const Jet psi3 = step_jet(ramp_down(r, s.at(17.0 / 3.0), s.at(5.9)));
            const Jet psi4 = step_jet(ramp_up(r, s.at(4.1), s.at(13.0 / 3.0)));
            const Jet ph = phi_jet(n + k, n + 2 * k, lam, r);
            out.a = psi1 * term(Lu4 + psi4 * ph);
            out.b = psi2 * term(Lu5 + psi3 * ph);
        } else {
            out.a = psi1 * term(Lu4);
            out.b = psi2 * term(Lu5);
        }
        out.u = out.a + out.b;
    }
    return out;
}

Jet PiecewiseSolution::eval_piece(int annulus, SubAnnulus sub, double r, double phi, double Lref, double dphi) const {
    return pieces(annulus, sub, r, phi, Lref, dphi).u;
}

Jet PiecewiseSolution::eval_jet(double r, double phi, double Lref, double dphi) const {
    const int j = annulus_index(r);
    if (j < 0) return cap_jet(r, phi, Lref, dphi);
    return pieces(j, annuli[j].locate(r), r, phi, Lref, dphi).u;
}

Scaled PiecewiseSolution::eval_u(double r, double phi) const {
    const double L = log_M(r).first;
    return {eval_jet(r, phi, L).v, L};
}

std::array<cplx, 2> PiecewiseSolution::eval_grad_u(double r, double phi) const {
    const Jet u = eval_jet(r, phi, log_M(r).first);
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * u.r - s * u.p / r, s * u.r + c * u.p / r};
}

cplx PiecewiseSolution::potential_V(double r, double phi) const {
    if (kind != CaseKindVW::Vcase) return 0.0;
    const double L = log_M(r).first;
    const int j = annulus_index(r);
    const SubAnnulus sub = j < 0 ? SubAnnulus::Cap : annuli[j].locate(r);
    const Pieces P = pieces(j, sub, r, phi, L);
    if (sub == SubAnnulus::S1C) {
        // Split into the pure-mode multiplier and the phase-mismatch term, which vanishes on the flat sectors.
        const Annulus& A = annuli[j];
        const double n = A.spec.n, k = A.spec.k;
        const Step f = A.phase.f(phi);
        const cplx J1 = helmholtz(P.a, r, lambda) / P.a.v;
        const cplx K1 = -(8.0 * n * k + 2.0 * (n + 2.0 * k) * f.v + f.v * f.v - I * f.d1) / (r * r);
        if (K1 == cplx(0.0)) return J1;
        return J1 + K1 * P.b.v / P.u.v;
    }
    if (sub == SubAnnulus::S4C) return helmholtz(P.a, r, lambda) / P.a.v;
    return helmholtz(P.u, r, lambda) / P.u.v;
}

std::array<cplx, 2> PiecewiseSolution::potential_W(double r, double phi) const {
    if (kind != CaseKindVW::Wcase) return {0.0, 0.0};
    const double L = log_M(r).first;
    const int j = annulus_index(r);
    const SubAnnulus sub = j < 0 ? SubAnnulus::Cap : annuli[j].locate(r);
    const Pieces P = pieces(j, sub, r, phi, L);
    const double c = std::cos(phi), s = std::sin(phi);
    const std::array<cplx, 2> e1{c, s};
    const std::array<cplx, 2> e2{I * s, -I * c};
    auto combine = [&](cplx w1, cplx w2) {
        return std::array<cplx, 2>{w1 * e1[0] + w2 * e2[0], w1 * e1[1] + w2 * e2[1]};
    };
    if (sub == SubAnnulus::S2 || sub == SubAnnulus::S3) return combine(helmholtz(P.u, r, lambda) / P.u.r, 0.0);
    if (sub == SubAnnulus::S1C || sub == SubAnnulus::S4C) {
        // Match the coefficients of both components separately (2x2 frame solve).
        auto row = [&](const Jet& X) {
            return std::array<cplx, 3>{X.r / X.v, -I / r * X.p / X.v, helmholtz(X, r, lambda) / X.v};
        };
        const auto a = row(P.a), b = row(P.b);
        const cplx det = a[0] * b[1] - a[1] * b[0];
        const cplx w1 = (a[2] * b[1] - a[1] * b[2]) / det;
        const cplx w2 = (a[0] * b[2] - a[2] * b[0]) / det;
        return combine(w1, w2);
    }
    return combine(0.0, helmholtz(P.u, r, lambda) / (-I / r * P.u.p));
}

double PiecewiseSolution::potential_abs(double r, double phi) const {
    if (kind == CaseKindVW::Vcase) return std::abs(potential_V(r, phi));
    const auto W = potential_W(r, phi);
    return std::sqrt(std::norm(W[0]) + std::norm(W[1]));
}

std::pair<double, double> PiecewiseSolution::fd_steps(double r) const {
    const int j = annulus_index(r);
    const auto [L, dL] = log_M(r);
    (void)L;
    if (j < 0) {
        const double rate = std::max({std::abs(dL), n1 / r, 32.0 / rho1});
        return {0.02 / rate, 0.02 / n1};
    }
    const auto& s = annuli[j].spec;
    const double width = std::pow(s.rho, s.alpha) / 3.0;
    const double rate = std::max({std::abs(dL), (s.n + 2.0 * s.k) / r, 24.0 / width});
    // The angular profile only enters steps 1 and 2; elsewhere a coarser phi step limits rounding.
    const SubAnnulus sub = annuli[j].locate(r);
    const bool profiled = is_step1(sub) || sub == SubAnnulus::S2;
    const double hr = (sub == SubAnnulus::S3 ? 0.005 : 0.02) / rate;
    return {hr, annuli[j].phase.period() / (profiled ? 3000.0 : 500.0)};
}

double PiecewiseSolution::fd_residual(double r, double phi, double h_r, double h_phi) const {
    const double L = log_M(r).first;
    auto u = [&](double rr, double dp) { return eval_jet(rr, phi, L, dp).v; };
    const Jet c = eval_jet(r, phi, L);
    const cplx u0 = c.v;
    const cplx rp1 = u(r + h_r, 0.0), rm1 = u(r - h_r, 0.0), rp2 = u(r + 2 * h_r, 0.0), rm2 = u(r - 2 * h_r, 0.0);
    const cplx pp1 = u(r, h_phi), pm1 = u(r, -h_phi), pp2 = u(r, 2 * h_phi), pm2 = u(r, -2 * h_phi);
    const cplx ur = (-rp2 + 8.0 * rp1 - 8.0 * rm1 + rm2) / (12.0 * h_r);
    const cplx urr = (-rp2 + 16.0 * rp1 - 30.0 * u0 + 16.0 * rm1 - rm2) / (12.0 * h_r * h_r);
    const cplx up = (-pp2 + 8.0 * pp1 - 8.0 * pm1 + pm2) / (12.0 * h_phi);
    const cplx upp = (-pp2 + 16.0 * pp1 - 30.0 * u0 + 16.0 * pm1 - pm2) / (12.0 * h_phi * h_phi);
    const cplx lap = urr + ur / r + upp / (r * r);
    cplx res = lap + lambda.value * u0;
    if (kind == CaseKindVW::Vcase) {
        res -= potential_V(r, phi) * u0;
    } else {
        const auto W = potential_W(r, phi);
        const double cs = std::cos(phi), sn = std::sin(phi);
        res -= W[0] * (cs * ur - sn * up / r) + W[1] * (sn * ur + cs * up / r);
    }
    const double scale = std::abs(c.rr) + std::abs(c.r) / r + std::abs(c.pp) / (r * r) + std::abs(lambda.value * u0);
    return std::abs(res) / scale;
}

nlohmann::json PiecewiseSolution::constants_json() const {
    using nlohmann::json;
    auto cj = [](cplx z) { return json::array({z.real(), z.imag()}); };
    json out;
    out["case"] = kind == CaseKindVW::Vcase ? "V" : "W";
    out["lambda"] = cj(lambda.value);
    out["beta0"] = beta0;
    out["decay_rate"] = decay_rate();
    out["rho1"] = rho1;
    json arr = json::array();
    for (const auto& A : annuli) {
        const auto& s = A.spec;
        const auto& g = A.guards;
        arr.push_back({{"rho", s.rho},
                       {"rho_next", A.r1()},
                       {"alpha", s.alpha},
                       {"n", s.n},
                       {"k", s.k},
                       {"n_defect", s.n_defect()},
                       {"k_defect", s.k_defect()},
                       {"log_b", cj(A.log_b)},
                       {"log_d", cj(A.log_d)},
                       {"log_b1", cj(A.log_b1)},
                       {"log_a", cj(A.log_a)},
                       {"log_gain", cj(A.log_gain)},
                       {"C_uBd1", g.C_uBd1},
                       {"C_uBd2", g.C_uBd2},
                       {"C_uBd3", g.C_uBd3},
                       {"C_uBd4", g.C_uBd4},
                       {"g_max", g.g_max},
                       {"C_g", g.C_g},
                       {"im_q_sup", g.im_q_sup},
                       {"f_slope_constant", A.phase.slope_constant()}});
    }
    out["annuli"] = arr;
    return out;
}

void PiecewiseSolution::write_fields_csv(std::ostream& os, int nr, int nphi) const {
    os << std::setprecision(12);
    os << "r,phi,log_scale,re_u,im_u,abs_potential\n";
    for (int i = 0; i <= nr; ++i) {
        const double r = rho1 + (r_max() - rho1) * i / nr;
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * kPi * j / nphi;
            const Scaled u = eval_u(r, phi);
            os << r << ',' << phi << ',' << u.log_scale << ',' << u.value.real() << ',' << u.value.imag() << ','
               << potential_abs(r, phi) << '\n';
        }
    }
}

// ---------------------------------------------------------------- verification

namespace {

struct Stratum {
    double a, b;
    int annulus;
};

std::vector<Stratum> strata(const PiecewiseSolution& sol) {
    std::vector<Stratum> out;
    out.push_back({sol.rho1 / 4.0, sol.rho1, -1});
    const double cuts[] = {0.0, 2.0 / 3.0, 4.0 / 3.0, 2.0, 3.0, 4.0, 14.0 / 3.0, 16.0 / 3.0, 6.0};
    for (std::size_t j = 0; j < sol.annuli.size(); ++j)
        for (int i = 0; i < 8; ++i)
            out.push_back({sol.annuli[j].spec.at(cuts[i]), sol.annuli[j].spec.at(cuts[i + 1]), static_cast<int>(j)});
    return out;
}

}  // namespace

DecayProfile sample_decay(const PiecewiseSolution& sol, int radii) {
    DecayProfile d;
    for (const auto& A : sol.annuli)
        for (int i = 0; i < radii; ++i) d.r.push_back(A.spec.at(6.0 * i / radii));
    d.r.push_back(sol.r_max());
    d.log_m.assign(d.r.size(), 0.0);
    d.log_M.assign(d.r.size(), 0.0);
    parallel_for(d.r.size(), [&](std::size_t i) {
        const double r = d.r[i];
        const double L = sol.log_M(r).first;
        const int j = sol.annulus_index(r);
        const SubAnnulus sub = sol.locate(r);
        const int n = sol.annuli[j].spec.n, k = sol.annuli[j].spec.k;
        const bool flat = sub == SubAnnulus::S2 || sub == SubAnnulus::S3;
        const int grid = flat ? 16 : std::max(720, 16 * (n + 2 * k));
        double m = 0.0;
        for (int g = 0; g < grid; ++g) m = std::max(m, std::abs(sol.eval_jet(r, 2.0 * kPi * g / grid, L).v));
        d.log_m[i] = std::log(m) + L;
        d.log_M[i] = L;
    });
    return d;
}

DecayFit fit_decay_exponent(const DecayProfile& d, CaseKindVW kind) {
    DecayFit best;
    best.rms = std::numeric_limits<double>::infinity();
    const std::size_t N = d.r.size();
    for (int s = 0; s <= 3000; ++s) {
        const double p = 0.5 + s * 1e-3;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::vector<double> x(N);
        for (std::size_t i = 0; i < N; ++i) {
            x[i] = std::pow(d.r[i], p);
            if (kind == CaseKindVW::Vcase) x[i] /= std::log(d.r[i]);
            const double y = -d.log_m[i];
            sx += x[i];
            sy += y;
            sxx += x[i] * x[i];
            sxy += x[i] * y;
        }
        const double den = N * sxx - sx * sx;
        const double c = (N * sxy - sx * sy) / den;
        const double A = (sy - c * sx) / N;
        double rss = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = -d.log_m[i] - (A + c * x[i]);
            rss += e * e;
        }
        const double rms = std::sqrt(rss / N);
        if (rms < best.rms) best = {p, c, A, rms};
    }
    return best;
}

VerificationReport verify_decay(const PiecewiseSolution& sol, int radii, double fit_window) {
    VerificationReport rep;
    const DecayProfile d = sample_decay(sol, radii);
    double excess = -std::numeric_limits<double>::infinity(), start_defect = 0.0;
    for (std::size_t i = 0; i < d.r.size(); ++i) {
        excess = std::max(excess, d.log_m[i] - d.log_M[i]);
        if (i % radii == 0 && i / radii < sol.annuli.size()) start_defect = std::max(start_defect, std::abs(d.log_m[i] - d.log_M[i]));
    }
    rep.add("m_le_2M", "m(r) <= 2 M(r) (log m - log M <= log 2)", excess, std::log(2.0), 1e-12);
    rep.add("m_equals_M_at_start", "M(rho_j) = m(rho_j)", start_defect, 0.0, 1e-9);

    // Fit through the annulus starts, where m = M; inside an annulus the slope of -log m swings by
    // about 2k/n, which over a few annuli swamps the curvature the exponent is read from.
    DecayProfile starts;
    for (std::size_t i = 0; i < d.r.size(); i += radii) {
        starts.r.push_back(d.r[i]);
        starts.log_m.push_back(d.log_m[i]);
        starts.log_M.push_back(d.log_M[i]);
    }
    const DecayFit fit = fit_decay_exponent(starts, sol.kind);
    const DecayFit all = fit_decay_exponent(d, sol.kind);
    rep.add("decay_fit_exponent",
            sol.kind == CaseKindVW::Vcase ? "-log m(r) ~ c r^p / log r with p = beta0" : "-log m(r) ~ c r^p with p = beta0",
            std::abs(fit.p - sol.beta0), 0.0, fit_window, Sense::AtMost,
            "fitted p = " + std::to_string(fit.p) + " at annulus starts (" + std::to_string(all.p) +
                " over all samples), beta0 = " + std::to_string(sol.beta0));

    // d/dr log M <= -c r^(beta0-1)/log r (V) or -c r^(beta0-1) (W), away from the kinks.
    double cmin = std::numeric_limits<double>::infinity();
    for (const auto& A : sol.annuli) {
        for (int i = 1; i < 600; ++i) {
            const double r = A.spec.at(6.0 * (i + 0.5) / 600.0);
            if (r >= sol.r_max()) continue;
            const double g = std::pow(r, sol.beta0 - 1.0) / (sol.kind == CaseKindVW::Vcase ? std::log(r) : 1.0);
            cmin = std::min(cmin, -sol.log_M(r).second / g);
        }
    }
    rep.add("log_M_slope", "d/dr ln M(r) <= -c r^(beta0-1)/log r (V) or -c r^(beta0-1) (W), c > 0", cmin, 0.0, 0.0,
            Sense::AtLeast, "measured c");
    return rep;
}

VerificationReport verify_meshkov(const PiecewiseSolution& sol, const MeshkovCheckOptions& opt) {
    VerificationReport rep;
    const bool V = sol.kind == CaseKindVW::Vcase;

    // Continuity at every seam, left and right formulas evaluated at the same point.
    struct Seam {
        int jl;
        SubAnnulus sl;
        int jr;
        SubAnnulus sr;
        double r;
    };
    std::vector<Seam> seams;
    seams.push_back({-1, SubAnnulus::Cap, 0, SubAnnulus::S1A, sol.rho1});
    const std::pair<double, SubAnnulus> inner[] = {
        {2.0 / 3.0, SubAnnulus::S1C}, {4.0 / 3.0, SubAnnulus::S1B}, {2.0, SubAnnulus::S2},
        {3.0, SubAnnulus::S3},        {4.0, SubAnnulus::S4A},       {14.0 / 3.0, SubAnnulus::S4C},
        {16.0 / 3.0, SubAnnulus::S4B}};
    for (std::size_t j = 0; j < sol.annuli.size(); ++j) {
        SubAnnulus prev = SubAnnulus::S1A;
        for (const auto& [x, s] : inner) {
            seams.push_back({int(j), prev, int(j), s, sol.annuli[j].spec.at(x)});
            prev = s;
        }
        if (j + 1 < sol.annuli.size())
            seams.push_back({int(j), SubAnnulus::S4B, int(j + 1), SubAnnulus::S1A, sol.annuli[j].r1()});
    }
    std::vector<double> seam_defect(seams.size(), 0.0);
    parallel_for(seams.size(), [&](std::size_t i) {
        const auto& s = seams[i];
        const double L = sol.log_M(s.r).first;
        double worst = 0.0;
        for (int p = 0; p < opt.continuity_phi; ++p) {
            const double phi = 2.0 * kPi * p / opt.continuity_phi;
            const cplx a = sol.eval_piece(s.jl, s.sl, s.r, phi, L).v;
            const cplx b = sol.eval_piece(s.jr, s.sr, s.r, phi, L).v;
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
        }
        seam_defect[i] = worst;
    });
    rep.add("continuity", "u continuous across every sub-annulus and annulus boundary (720-point phi grid)",
            *std::max_element(seam_defect.begin(), seam_defect.end()), 0.0, 1e-8);

    // FD residual on stratified random points.
    const auto st = strata(sol);
    const int per = std::max(1, opt.residual_points / static_cast<int>(st.size()));
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    struct Pt {
        double r, phi;
        int stratum;
    };
    std::vector<Pt> pts;
    for (std::size_t s = 0; s < st.size(); ++s)
        for (int i = 0; i < per; ++i) pts.push_back({st[s].a + (st[s].b - st[s].a) * U(rng), 2.0 * kPi * U(rng), int(s)});
    // Pure-mode end pieces.
    std::vector<Pt> pure;
    for (const auto& A : sol.annuli)
        for (int i = 0; i < 100; ++i) {
            pure.push_back({A.spec.at(0.1 * U(rng)), 2.0 * kPi * U(rng), -1});
            pure.push_back({A.spec.at(5.9 + 0.1 * U(rng)), 2.0 * kPi * U(rng), -1});
        }
    auto residual_at = [&](const Pt& p) {
        auto [hr, hp] = sol.fd_steps(p.r);
        const double r = std::clamp(p.r, 3.0 * hr, sol.r_max() - 3.0 * hr);
        return sol.fd_residual(r, p.phi, hr, hp);
    };
    std::vector<double> res(pts.size()), res_pure(pure.size());
    parallel_for(pts.size(), [&](std::size_t i) { res[i] = residual_at(pts[i]); });
    parallel_for(pure.size(), [&](std::size_t i) { res_pure[i] = residual_at(pure[i]); });
    std::vector<double> by_stratum(st.size(), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        by_stratum[pts[i].stratum] = std::max(by_stratum[pts[i].stratum], std::isfinite(res[i]) ? res[i] : 1e300);
    double worst = *std::max_element(by_stratum.begin(), by_stratum.end());
    std::size_t worst_s = std::max_element(by_stratum.begin(), by_stratum.end()) - by_stratum.begin();
    std::string where = st[worst_s].annulus < 0
                            ? std::string("cap")
                            : "annulus " + std::to_string(st[worst_s].annulus + 1) + " " +
                                  sub_name(sol.annuli[st[worst_s].annulus].locate(0.5 * (st[worst_s].a + st[worst_s].b)));
    rep.add("fd_residual", V ? "Delta u + lambda u = V u, fourth-order FD oracle" : "Delta u + lambda u = W . grad u, fourth-order FD oracle",
            worst, 0.0, 1e-4, Sense::AtMost,
            std::to_string(pts.size()) + " stratified points; worst in " + where);
    rep.add("fd_residual_pure_mode", "u = r^-n e^{-in phi} mu_n on [rho, rho+0.1 rho^a] and the mirrored end piece",
            *std::max_element(res_pure.begin(), res_pure.end()), 0.0, 1e-6);

    // Potential decay: sup r^rate |pot| per annulus, compared between neighbours.
    const double rate = sol.decay_rate();
    std::vector<double> sup(sol.annuli.size(), 0.0);
    bool finite = true;
    for (std::size_t j = 0; j < sol.annuli.size(); ++j) {
        const auto& A = sol.annuli[j];
        const int nr = 240, np = 48;
        std::vector<double> local(nr, 0.0);
        std::vector<char> ok(nr, 1);
        const double span = 2.0 * A.phase.period();
        parallel_for(nr, [&](std::size_t i) {
            const double r = A.spec.at(6.0 * (i + 0.5) / nr);
            double m = 0.0;
            for (int p = 0; p < np; ++p) {
                const double v = sol.potential_abs(r, span * (p + 0.5) / np);
                if (!std::isfinite(v)) ok[i] = 0;
                else m = std::max(m, v);
            }
            local[i] = std::pow(r, rate) * m;
        });
        for (int i = 0; i < nr; ++i) {
            sup[j] = std::max(sup[j], local[i]);
            finite = finite && ok[i];
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].stratum == 0) continue;
        const int j = st[pts[i].stratum].annulus;
        const double v = sol.potential_abs(pts[i].r, pts[i].phi);
        if (!std::isfinite(v)) finite = false;
        else sup[j] = std::max(sup[j], std::pow(pts[i].r, rate) * v);
    }
    double ratio = 1.0;
    for (std::size_t j = 1; j < sup.size(); ++j) ratio = std::max(ratio, std::max(sup[j], sup[j - 1]) / std::min(sup[j], sup[j - 1]));
    std::string sups;
    for (double s : sup) sups += (sups.empty() ? "" : ", ") + std::to_string(s);
    rep.add("potential_decay_stability",
            V ? "sup r^N |V| stable across annuli (|V| <= C r^-N)" : "sup r^P |W| stable across annuli (|W| <= C r^-P)",
            ratio, 2.0, 0.0, Sense::AtMost, "per-annulus sups: " + sups);
    rep.add_flag("potential_finite", "potential finite at every sampled point", finite);

    // Construction margins.
    double c1 = 1e300, c2 = 1e300, c3 = 1e300, c4 = 1e300, gmax = 0.0, match = 0.0;
    for (const auto& A : sol.annuli) {
        c1 = std::min(c1, A.guards.C_uBd1);
        c2 = std::min(c2, A.guards.C_uBd2);
        c3 = std::min(c3, A.guards.C_uBd3);
        c4 = std::min(c4, A.guards.C_uBd4);
        gmax = std::max(gmax, A.guards.g_max);
        match = std::max(match, A.guards.match_defect);
    }
    rep.add("ratio_guard_1", "|u2/u1| <= e^-C on [rho, rho + 2/3 rho^a]", c1, 0.0, 0.0, Sense::AtLeast, "min C");
    rep.add("ratio_guard_2", "|u2/u1| >= e^C on [rho + 4/3 rho^a, rho + 2 rho^a]", c2, 0.0, 0.0, Sense::AtLeast, "min C");
    rep.add("ratio_guard_3", "|u5/u4| <= e^-C on [rho + 4 rho^a, rho + 14/3 rho^a]", c3, 0.0, 0.0, Sense::AtLeast, "min C");
    rep.add("ratio_guard_4", "|u5/u4| >= e^C on [rho + 16/3 rho^a, rho + 6 rho^a]", c4, 0.0, 0.0, Sense::AtLeast, "min C");
    rep.add("amplitude_swap", "1 >= |g(r)| >= e^-C on [rho + 3 rho^a, rho + 4 rho^a]", gmax, 1.0, 1e-12);
    rep.add("matching_b", "|u1| = |u2| at rho + rho^a by the choice of b", match, 0.0, 1e-10);

    // Sector bounds on S and the 1C lower bound for |u|.
    double sector_margin = 1e300, lower_ratio = 1e300, sprime = 1e300;
    for (std::size_t j = 0; j < sol.annuli.size(); ++j) {
        const auto& A = sol.annuli[j];
        const int n = A.spec.n, k = A.spec.k;
        const double T = A.phase.period();
        const int sectors = 2 * (n + k);
        for (int m = 0; m < sectors; ++m) {
            for (int q = 0; q <= 8; ++q) {
                const double phi = m * T + T / 5.0 + (3.0 * T / 5.0) * q / 8.0;
                const double S = A.phase.S(phi);
                sector_margin = std::min({sector_margin, S - (2.0 * kPi * m + kPi / 7.0), 2.0 * kPi * (m + 1) - kPi / 7.0 - S});
            }
        }
        for (int q = 0; q <= 400; ++q) sprime = std::min(sprime, 2.0 * n + 2.0 * k + A.phase.f(T * q / 400.0).v - n);
        const int nr = 16;
        std::vector<double> local(nr, 1e300);
        parallel_for(nr, [&](std::size_t i) {
            const double r = A.spec.at(2.0 / 3.0 + (2.0 / 3.0) * (i + 0.5) / nr);
            const double L = sol.log_M(r).first;
            double worst_local = 1e300;
            for (int m = 0; m < sectors; ++m)
                for (int q = 0; q < 4; ++q) {
                    const double phi = m * T + T / 5.0 + (3.0 * T / 5.0) * (q + 0.5) / 4.0;
                    const double n_ = n, k_ = k;
                    const auto& lam = sol.lambda;
                    cplx lu2 = A.log_b + cplx(0, kPi) + (2 * k_ - n_) * std::log(r) + I * A.phase.F(phi) +
                               lmu(n - 2 * k, lam, r) + A.log_gain - L;
                    if (V) lu2 += phi_ab(n, n - 2 * k, lam, r);
                    const double u2 = std::exp(lu2.real());
                    const double uu = std::abs(sol.eval_piece(int(j), SubAnnulus::S1C, r, phi, L).v);
                    worst_local = std::min(worst_local, uu / (0.5 * u2 * std::sin(kPi / 7.0)));
                }
            local[i] = worst_local;
        });
        for (double v : local) lower_ratio = std::min(lower_ratio, v);
    }
    rep.add("sector_bound", "2 pi m + pi/7 <= S(phi) <= 2 pi (m+1) - pi/7 on [phi_m + T/5, phi_m + 4T/5]",
            sector_margin, 0.0, 1e-12, Sense::AtLeast, "min margin");
    rep.add("phase_monotone", "S'(phi) > n", sprime, 0.0, 0.0, Sense::AtLeast, "min S' - n");
    rep.add("lower_bound_1C", "|u| >= 1/2 |u2| |exp(phi)| sin(pi/7) on the sectors P_m", lower_ratio, 1.0, 0.0,
            Sense::AtLeast, "min |u| / (1/2 |u2 e^phi| sin(pi/7))");

    rep.merge(verify_decay(sol, opt.decay_radii, opt.fit_window), "decay");
    return rep;
}

double im_part_sup(const AnnulusSpec& spec, int samples) {
    const int n = spec.n, k = spec.k;
    const auto& lam = spec.lambda;
    if (lam.is_zero()) return 0.0;
    const double R = spec.at(1.0);
    const cplx base = -lmu(n, lam, R) + lmu(n - 2 * k, lam, R);
    double sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double r = spec.at(2.0 / 3.0 + (2.0 / 3.0) * i / samples);
        const cplx lq = 2.0 * k * (std::log(R) - std::log(r)) + lmu(n, lam, r) - lmu(n - 2 * k, lam, r) + base;
        sup = std::max(sup, std::abs(std::exp(lq).imag()));
    }
    return sup;
}

ImPartSweep im_part_sweep(const std::vector<int>& ns, double beta0, const Eigenvalue& lam) {
    ImPartSweep out;
    for (int n : ns) {
        // rho with rho^beta0 / log rho = n.
        double lo = 3.0, hi = 1e15;
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);
            (n_target(mid, beta0, CaseKindVW::Vcase) < n ? lo : hi) = mid;
        }
        AnnulusSpec s;
        s.rho = 0.5 * (lo + hi);
        s.beta0 = beta0;
        s.alpha = 1.0 - beta0 / 2.0;
        s.n = n;
        s.k = static_cast<int>(std::lround(k_target(s.rho, beta0, CaseKindVW::Vcase)));
        s.lambda = lam;
        s.kind = CaseKindVW::Vcase;
        const double sup = im_part_sup(s, 2000);
        out.n.push_back(n);
        out.rho.push_back(s.rho);
        out.sup_im.push_back(sup);
        out.scaled.push_back(sup * n);
    }
    const std::size_t N = out.n.size();
    if (N >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double x = std::log(double(out.n[i])), y = std::log(out.sup_im[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
        out.spread = *std::max_element(out.scaled.begin(), out.scaled.end()) /
                     *std::min_element(out.scaled.begin(), out.scaled.end());
    }
    return out;
}

VerificationReport im_part_check(const AnnulusSpec& spec, int samples) {
    VerificationReport rep;
    const double sup = im_part_sup(spec, samples);
    rep.add("im_part_sup", "|Im(r^-2k mu_n / (b mu_(n-2k)))| <= 1/2 sin(pi/7)", sup, 0.5 * std::sin(kPi / 7.0), 0.0);
    rep.add("im_part_times_n", "|Im(r^-2k mu_n / (b mu_(n-2k)))| <= C/n (value of n sup|Im|)", sup * spec.n,
            std::numeric_limits<double>::max(), 0.0);
    return rep;
}

}  // namespace uclab
