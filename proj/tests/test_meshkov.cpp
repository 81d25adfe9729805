#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "uclab/meshkov.hpp"

using namespace uclab;

namespace {

constexpr double kPi = std::numbers::pi;

PiecewiseSolution build(CaseKindVW kind, Eigenvalue lam, int annuli = 3) {
    MeshkovOptions o;
    o.kind = kind;
    o.lambda = lam;
    o.annuli = annuli;
    return build_meshkov(o);
}

cplx log_of(const Scaled& s) { return std::log(s.value) + s.log_scale; }

}  // namespace

TEST_CASE("annulus parameters") {
    // W case, beta0 = 3/2, rho = 1e4: k near 6 (3/2) 10^3
    const NK w = choose_nk(1e4, 1.5, CaseKindVW::Wcase);
    CHECK(std::abs(w.k - 9000.0) <= 40.0);
    CHECK(w.n == 1000000);

    double prev = 1.0;
    for (double rho : {1e2, 1e3, 1e4, 1e5}) {
        const NK v = choose_nk(rho, 4.0 / 3.0, CaseKindVW::Vcase);
        const double ratio = static_cast<double>(v.k) / v.n;
        CHECK(ratio < prev);
        CHECK(v.k / std::sqrt(static_cast<double>(v.n)) < 4.0);
        prev = ratio;
    }
    CHECK_THROWS_AS(choose_nk(5.0, 4.0 / 3.0, CaseKindVW::Vcase), GuardFailure);
}

TEST_CASE("phase profile") {
    const PhaseProfile ph = build_phase(100, 32);
    const double T = ph.period();
    CHECK(T == doctest::Approx(kPi / 132.0));
    CHECK(std::abs(ph.Phi(T) - ph.Phi(0.0)) < 1e-12);
    for (int m = 0; m <= 5; ++m) CHECK(std::abs(ph.Phi(m * T)) < 1e-12);
    for (int m = 0; m <= 5; ++m)
        for (int i = 0; i <= 200; ++i) {
            const double phi = m * T + T / 5.0 + (3.0 * T / 5.0) * i / 200.0;
            const double S = ph.S(phi);
            CHECK(S >= 2 * kPi * m + kPi / 7.0);
            CHECK(S <= 2 * kPi * (m + 1) - kPi / 7.0);
        }
    // S' = 2n + 2k + f > n
    for (int i = 0; i < 500; ++i) CHECK(2 * 100 + 2 * 32 + ph.f(i * T / 500.0).v > 100.0);
    CHECK_THROWS(build_phase(10, 8));
}

TEST_CASE("consecutive annuli chain n and k") {
    const PiecewiseSolution s = build(CaseKindVW::Vcase, Eigenvalue(0.0, 1.0));
    REQUIRE(s.annuli.size() == 3);
    for (std::size_t j = 0; j + 1 < s.annuli.size(); ++j) {
        CHECK(s.annuli[j + 1].spec.n == s.annuli[j].spec.n + s.annuli[j].spec.k);
        CHECK(s.annuli[j + 1].spec.rho == doctest::Approx(s.annuli[j].r1()));
    }
    for (const auto& a : s.annuli) {
        CHECK(a.guards.g_max <= 1.0 + 1e-12);
        CHECK(std::isfinite(a.guards.C_g));
        CHECK(a.guards.match_defect < 1e-10);
    }
}

TEST_CASE("pure mode at the annulus start") {
    const PiecewiseSolution s = build(CaseKindVW::Vcase, Eigenvalue(0.0, 1.0));
    const auto& spec = s.annuli.front().spec;
    const int n = spec.n;
    cplx ref{};
    for (int i = 0; i < 8; ++i) {
        const double r = spec.at(0.1 * i / 7.0), phi = 0.37 + 0.8 * i;
        const cplx mode = -n * std::log(r) - cplx(0.0, n * phi) + std::log(mu(n, spec.lambda, r));
        cplx diff = log_of(s.eval_u(r, phi)) - mode;
        diff.imag(std::remainder(diff.imag(), 2 * kPi));
        if (i == 0) ref = diff;
        const cplx d = diff - ref;
        CHECK(std::abs(d.real()) < 1e-9);
        CHECK(std::abs(std::remainder(d.imag(), 2 * kPi)) < 1e-9);
    }
}

TEST_CASE("periodicity and gradient") {
    const PiecewiseSolution s = build(CaseKindVW::Wcase, Eigenvalue(0.0, 1.0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(s.rho1, s.r_max()), up(0.0, 2 * kPi);
    double worst_per = 0.0, worst_grad = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = ur(rng), phi = up(rng);
        const Scaled a = s.eval_u(r, phi), b = s.eval_u(r, phi + 2 * kPi);
        worst_per = std::max(worst_per, std::abs(std::exp(log_of(b) - log_of(a)) - 1.0));

        const double x = r * std::cos(phi), y = r * std::sin(phi), h = r * 1e-8;
        auto at = [&](double px, double py) {
            const Scaled v = s.eval_u(std::hypot(px, py), std::atan2(py, px));
            return v.value * std::exp(v.log_scale - a.log_scale);
        };
        const cplx gx = (at(x + h, y) - at(x - h, y)) / (2 * h);
        const cplx gy = (at(x, y + h) - at(x, y - h)) / (2 * h);
        const auto g = s.eval_grad_u(r, phi);
        const double scale = std::hypot(std::abs(g[0]), std::abs(g[1]));
        worst_grad = std::max(worst_grad, std::hypot(std::abs(gx - g[0]), std::abs(gy - g[1])) / scale);
    }
    // log|u| is of order n log r, so rounding of the log scale sets the floor
    CHECK(worst_per < 1e-10);
    CHECK(worst_grad < 1e-6);
}

TEST_CASE("harmonic mode for lambda = 0") {
    // r^-n e^{-i n phi} as a jet: Delta = 0 to rounding.
    const int n = 100;
    const double r = 103.0, phi = 0.7;
    const Jet lr = log(Jet::radius(r));
    const Jet u = exp(lr * cplx(-n) + Jet::angle(phi) * cplx(0.0, -n));
    CHECK(std::abs(laplacian(u, r)) <= 1e-13 * std::abs(u.rr));

    const PiecewiseSolution s = build(CaseKindVW::Vcase, Eigenvalue(0.0, 0.0));
    const auto& spec = s.annuli.front().spec;
    const double r0 = spec.at(0.05);
    const Jet v = s.eval_jet(r0, phi, s.log_M(r0).first);
    CHECK(std::abs(laplacian(v, r0)) <= 1e-12 * std::abs(v.rr));
    CHECK(std::abs(s.potential_V(r0, phi)) < 1e-12);
}

TEST_CASE("residual bounds") {
    const PiecewiseSolution s = build(CaseKindVW::Vcase, Eigenvalue(0.0, 1.0));
    const auto& spec = s.annuli.front().spec;
    {
        const double r = spec.at(0.05);
        const auto [hr, hp] = s.fd_steps(r);
        CHECK(s.fd_residual(r, 0.3, hr, hp) < 1e-6);
    }
    for (double x : {0.5, 1.7, 2.5, 3.5, 4.5, 5.5}) {
        const double r = spec.at(x);
        const auto [hr, hp] = s.fd_steps(r);
        CHECK(s.fd_residual(r, 1.1, hr, hp) < 1e-4);
    }
}

TEST_CASE("V construction passes its checks") {
    const PiecewiseSolution s = build(CaseKindVW::Vcase, Eigenvalue(0.0, 1.0));
    MeshkovCheckOptions co;
    co.residual_points = 2000;
    const VerificationReport rep = verify_meshkov(s, co);
    for (const auto& e : rep.entries()) {
        INFO(e.id);
        CHECK(e.pass);
    }
    for (const char* id : {"potential_decay_stability", "lower_bound_1C", "sector_bound", "decay/m_equals_M_at_start",
                           "decay/decay_fit_exponent", "decay/log_M_slope"})
        CHECK(rep.find(id) != nullptr);
    CHECK(rep.find("potential_decay_stability")->measured < 2.0);
}

TEST_CASE("W construction with lambda = 0 simplifies and passes") {
    const PiecewiseSolution s = build(CaseKindVW::Wcase, Eigenvalue(0.0, 0.0), 2);
    for (double r : {s.rho1 + 1.0, s.r_max() - 1.0}) CHECK(mu(s.annuli.front().spec.n, s.lambda, r) == cplx(1.0));
    MeshkovCheckOptions co;
    co.residual_points = 2000;
    CHECK(verify_meshkov(s, co).all_pass());
}

TEST_CASE("decay profile") {
    const PiecewiseSolution s = build(CaseKindVW::Wcase, Eigenvalue(0.0, 1.0));
    const VerificationReport rep = verify_decay(s, 40);
    CHECK(rep.all_pass());
    const DecayProfile d = sample_decay(s, 40);
    DecayProfile starts;
    for (std::size_t i = 0; i < d.r.size(); i += 40) {
        starts.r.push_back(d.r[i]);
        starts.log_m.push_back(d.log_m[i]);
        starts.log_M.push_back(d.log_M[i]);
    }
    const DecayFit fit = fit_decay_exponent(starts, CaseKindVW::Wcase);
    CHECK(std::abs(fit.p - s.beta0) <= 0.15);
}

TEST_CASE("guards") {
    MeshkovOptions o;
    o.rho1 = 5.0;
    CHECK_THROWS_AS(build_meshkov(o), GuardFailure);
    o.rho1 = 100.0;
    o.beta0 = 2.5;
    CHECK_THROWS_AS(build_meshkov(o), DomainError);
}

TEST_CASE("imaginary part on the 1C annulus") {
    AnnulusSpec spec;
    spec.rho = 100.0;
    spec.beta0 = 4.0 / 3.0;
    spec.alpha = 1.0 / 3.0;
    const NK nk = choose_nk(spec.rho, spec.beta0, CaseKindVW::Vcase);
    spec.n = nk.n;
    spec.k = nk.k;
    spec.lambda = Eigenvalue(0.01, 0.0);
    CHECK(im_part_sup(spec) == 0.0);

    // At the default floor the bound holds for lambda = -1 + i; lambda = i needs larger rho.
    AnnulusSpec floor = spec;
    floor.rho = kDefaultRhoFloor;
    const NK f = choose_nk(floor.rho, floor.beta0, CaseKindVW::Vcase);
    floor.n = f.n;
    floor.k = f.k;
    floor.lambda = Eigenvalue(-1.0, 1.0);
    CHECK(im_part_check(floor).find("im_part_sup")->pass);
    CHECK(im_part_sup(floor) <= 0.5 * std::sin(kPi / 7.0));
}

TEST_CASE("imaginary part sweep, frozen") {
    // Desk-scale values for n in {1e3, 1e4, 1e5}, lambda = i; the scaled sup grows roughly like sqrt(n).
    const ImPartSweep sw = im_part_sweep({1000, 10000, 100000}, 4.0 / 3.0, Eigenvalue(0.0, 1.0));
    REQUIRE(sw.scaled.size() == 3);
    CHECK(sw.slope == doctest::Approx(-0.4613).epsilon(1e-3));
    CHECK(sw.scaled[0] == doctest::Approx(341.549).epsilon(1e-4));
    CHECK(sw.spread == doctest::Approx(11.952).epsilon(1e-3));
}
