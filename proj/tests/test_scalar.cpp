#include <cmath>
#include <numbers>

#include "doctest.h"
#include "uclab/meshkov.hpp"
#include "uclab/scalar.hpp"
#include "uclab/smoothstep.hpp"

using namespace uclab;

TEST_CASE("principal square root") {
    CHECK(std::abs(principal_sqrt(cplx(4.0, 0.0)) - cplx(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(principal_sqrt(cplx(-1.0, 0.0)) - cplx(0.0, 1.0)) < 1e-15);
    const cplx s = principal_sqrt(cplx(0.0, 2.0));
    CHECK(std::abs(s - cplx(1.0, 1.0)) < 1e-15);
    // (1 + i)^2 = 2i
    CHECK(std::abs(cplx(1.0, 1.0) * cplx(1.0, 1.0) - cplx(0.0, 2.0)) == 0.0);
    CHECK(principal_sqrt(cplx(-3.0, -1e-30)).real() >= 0.0);
}

TEST_CASE("eigenvalue argument lies in [-pi, pi)") {
    CHECK(Eigenvalue(-1.0, 0.0).argument == doctest::Approx(-std::numbers::pi));
    CHECK(Eigenvalue(0.0, 1.0).argument == doctest::Approx(std::numbers::pi / 2));
    CHECK(Eigenvalue(4.0, 0.0).nonneg_real());
    CHECK_FALSE(Eigenvalue(4.0, 1e-3).nonneg_real());
}

TEST_CASE("mu_n special values") {
    for (double n : {1.0, 7.0, 300.0}) {
        CHECK(mu(n, Eigenvalue(0.0, 0.0), 3.5) == cplx(1.0, 0.0));
        CHECK(std::abs(mu(n, Eigenvalue(0.3, 2.0), 0.0) - cplx(1.0, 0.0)) < 1e-15);
    }
}

TEST_CASE("mu_n against its small-argument series") {
    const double n = 1e4, r = 10.0;
    const cplx l(0.0, 1.0);
    const cplx series = l * r * r / (4.0 * n) + l * l * std::pow(r, 4) / (32.0 * std::pow(n, 3)) +
                        l * l * l * std::pow(r, 6) / (96.0 * std::pow(n, 5));
    const cplx expect = std::exp(series);
    const cplx got = mu(n, Eigenvalue(l), r);
    CHECK(std::abs(got - expect) / std::abs(expect) < 1e-5);
    // the three-term series is far more accurate than the bound asks
    CHECK(std::abs(got - expect) / std::abs(expect) < 1e-14);
}

TEST_CASE("log mu_n radial derivatives match central differences") {
    const Eigenvalue lam(0.4, -1.3);
    const double n = 40.0, r = 7.0, h = 1e-4;
    const Radial j = log_mu(n, lam, r);
    const cplx d1 = (log_mu(n, lam, r + h).f - log_mu(n, lam, r - h).f) / (2 * h);
    const cplx d2 = (log_mu(n, lam, r + h).f - 2.0 * j.f + log_mu(n, lam, r - h).f) / (h * h);
    CHECK(std::abs(d1 - j.d1) / std::abs(j.d1) < 1e-7);
    CHECK(std::abs(d2 - j.d2) / std::abs(j.d2) < 1e-5);
}

TEST_CASE("phi_ab") {
    CHECK(phi_ab(100.0, 90.0, Eigenvalue(0.0, 0.0), 50.0) == cplx(0.0, 0.0));

    // a = b = n = 100, lambda = i, r = 1, step 1e-4
    const Eigenvalue lam(0.0, 1.0);
    const double h = 1e-4;
    const cplx fd = (phi_ab(100.0, 100.0, lam, 1.0 + h) - phi_ab(100.0, 100.0, lam, 1.0 - h)) / (2 * h);
    const cplx exact = phi_ab_derivative(100.0, 100.0, lam, 1.0);
    CHECK(std::abs(fd - exact) / std::abs(exact) < 1e-6);
}

TEST_CASE("phi_ab stays O(log r) on an annulus") {
    const Eigenvalue lam(0.0, 1.0);
    const double beta0 = 4.0 / 3.0;
    const NK nk = choose_nk(1e3, beta0, CaseKindVW::Vcase);
    AnnulusSpec spec;
    spec.rho = 1e3;
    spec.beta0 = beta0;
    spec.alpha = 1.0 - beta0 / 2.0;
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double r = spec.at(6.0 * i / 60.0);
        const cplx v = phi_ab(nk.n, nk.n - 2.0 * nk.k, lam, r);
        worst = std::max(worst, std::abs(v) / std::log(r));
    }
    CHECK(worst < 1.0);
}

TEST_CASE("carleman weight") {
    CHECK(carleman_weight(1.0, 0.0) == 0.0);
    CHECK(carleman_weight(1.0, 1e-6) / 1e-6 == doctest::Approx(1.0).epsilon(1e-10));

    // 10^6-panel trapezoid oracle
    const int panels = 1000000;
    double sum = 0.5 * (1.0 + std::exp(-1.0));
    for (int i = 1; i < panels; ++i) {
        const double s = static_cast<double>(i) / panels;
        sum += std::exp(-s * s);
    }
    const double trap = sum / panels;
    CHECK(std::abs(carleman_weight(1.0, 1.0) - trap) < 1e-8);

    const WeightFunction w(2.0);
    CHECK(w.derivative(0.7) == doctest::Approx(std::exp(-2.0 * 0.49)));
    CHECK(w.comparability_constant() >= 1.0);
}

TEST_CASE("smooth step") {
    CHECK(smooth_step(-0.1).v == 0.0);
    CHECK(smooth_step(1.2).v == 1.0);
    CHECK(smooth_step(0.5).v == doctest::Approx(0.5));
    for (double t : {0.05, 0.3, 0.71, 0.95}) {
        CHECK(smooth_step(t).v + smooth_step(1.0 - t).v == doctest::Approx(1.0).epsilon(1e-15));
        const double h = 1e-5;
        const double d1 = (smooth_step(t + h).v - smooth_step(t - h).v) / (2 * h);
        const double d2 = (smooth_step(t + h).d1 - smooth_step(t - h).d1) / (2 * h);
        CHECK(smooth_step(t).d1 == doctest::Approx(d1).epsilon(1e-7));
        CHECK(smooth_step(t).d2 == doctest::Approx(d2).epsilon(1e-6));
    }
}

TEST_CASE("smooth step integral") {
    CHECK(smooth_step_integral(0.0) == 0.0);
    CHECK(smooth_step_integral(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    // midpoint-rule oracle
    const int panels = 200000;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) sum += smooth_step(0.3 * (i + 0.5) / panels).v;
    CHECK(std::abs(smooth_step_integral(0.3) - 0.3 * sum / panels) < 1e-11);
}

TEST_CASE("ramps keep tail precision") {
    const Step down = ramp_down(1.98, 1.0, 2.0);
    const Step up = ramp_up(1.02, 1.0, 2.0);
    CHECK(down.v == doctest::Approx(up.v).epsilon(1e-14));
    CHECK(down.v > 0.0);
    CHECK(down.d1 == doctest::Approx(-up.d1).epsilon(1e-14));
}

TEST_CASE("bump") {
    CHECK(bump(0.0).v == doctest::Approx(std::exp(-1.0)));
    CHECK(bump(1.0).v == 0.0);
    CHECK(bump(-1.5).v == 0.0);
    const double h = 1e-5, t = 0.4;
    CHECK(bump(t).d1 == doctest::Approx((bump(t + h).v - bump(t - h).v) / (2 * h)).epsilon(1e-7));
}
