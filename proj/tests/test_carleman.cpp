#include <cmath>
#include <numbers>

#include "doctest.h"
#include "uclab/carleman.hpp"

using namespace uclab;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("test functions are deterministic in the seed") {
    for (std::uint64_t s : {1u, 17u, 99u}) {
        const TestFunction a = sample_test_function(s), b = sample_test_function(s);
        CHECK(a.r_in == b.r_in);
        CHECK(a.r_out == b.r_out);
        CHECK(a.ell == b.ell);
        CHECK(a.power == b.power);
        CHECK(a.amplitude == b.amplitude);
        CHECK(a.r_in > 0.1);
        CHECK(a.r_out < 5.5);
        CHECK(a.ell >= 0);
        CHECK(a.ell <= 32);
    }
}

TEST_CASE("support and closed-form derivatives") {
    TestFunction f;
    f.r_in = 0.8;
    f.r_out = 2.3;
    f.ell = 3;
    f.power = 2;
    f.amplitude = cplx(0.6, -1.1);
    for (double r : {0.2, 0.79, 2.31, 4.0}) CHECK(f.value(r, 0.0) == cplx(0.0));

    const double h = 2e-5;
    double worst_g = 0.0, worst_l = 0.0;
    for (int i = 1; i < 40; ++i) {
        const double r = f.r_in + (f.r_out - f.r_in) * i / 40.0, th = 0.3 + 0.17 * i;
        const double x = r * std::cos(th), y = r * std::sin(th);
        const cplx gx = (f.value(x + h, y) - f.value(x - h, y)) / (2 * h);
        const cplx gy = (f.value(x, y + h) - f.value(x, y - h)) / (2 * h);
        const cplx lap = (f.value(x + h, y) + f.value(x - h, y) + f.value(x, y + h) + f.value(x, y - h) -
                          4.0 * f.value(x, y)) /
                         (h * h);
        const auto g = f.grad(x, y);
        const double scale = 1.0 + std::abs(g[0]) + std::abs(g[1]);
        worst_g = std::max(worst_g, (std::abs(gx - g[0]) + std::abs(gy - g[1])) / scale);
        worst_l = std::max(worst_l, std::abs(lap - f.laplacian(x, y)) / (1.0 + std::abs(f.laplacian(x, y))));
    }
    CHECK(worst_g < 1e-6);
    CHECK(worst_l < 1e-4);
}

TEST_CASE("zero function gives zero integrals") {
    TestFunction f;
    f.amplitude = cplx(0.0);
    const ProbeSample s = probe(f, 10.0, Eigenvalue(0.0, 1.0));
    CHECK(s.lhs_mass == 0.0);
    CHECK(s.lhs_grad == 0.0);
    CHECK(s.rhs == 0.0);
    CHECK(s.ratio() == 0.0);
}

TEST_CASE("radial reduction agrees with the 2d quadrature") {
    for (std::uint64_t seed : {2u, 5u, 9u}) {
        const TestFunction f = sample_test_function(seed);
        for (const Eigenvalue& lam : {Eigenvalue(0.0, 0.0), Eigenvalue(0.0, 1.0)}) {
            const ProbeSample a = probe(f, 10.0, lam), b = probe_2d(f, 10.0, lam);
            const double sa = std::exp(a.log_scale), sb = std::exp(b.log_scale);
            INFO("seed " << seed);
            CHECK(std::abs(a.lhs_mass * sa - b.lhs_mass * sb) <= 1e-6 * a.lhs_mass * sa);
            CHECK(std::abs(a.lhs_grad * sa - b.lhs_grad * sb) <= 1e-6 * a.lhs_grad * sa);
            CHECK(std::abs(a.rhs * sa - b.rhs * sb) <= 1e-6 * a.rhs * sa);
        }
    }
}

TEST_CASE("harmonic profile: rhs lives on the ramps") {
    TestFunction f;
    f.r_in = 1.0;
    f.r_out = 3.0;
    f.ell = 4;
    f.power = 4;
    CHECK(rhs_transition_share(f, 20.0, Eigenvalue(0.0, 0.0)) > 1.0 - 1e-9);
}

TEST_CASE("threshold flag and ratio") {
    CHECK(alpha_threshold(Eigenvalue(4.0, 0.0), 3.0) == doctest::Approx(9.0));
    const TestFunction f = sample_test_function(4);
    const ProbeSample low = probe(f, 2.0, Eigenvalue(4.0, 0.0));
    CHECK(low.below_threshold);
    const ProbeSample high = probe(f, 20.0, Eigenvalue(4.0, 0.0));
    CHECK_FALSE(high.below_threshold);
    CHECK(high.ratio() >= 0.0);
    CHECK(high.step_change < 1e-9);
}

TEST_CASE("C3 estimate is monotone in the sample set") {
    std::vector<ProbeSample> all;
    double prev = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        all.push_back(probe(sample_test_function(s), 10.0, Eigenvalue(0.0, 1.0)));
        const C3Estimate e = estimate_C3(all);
        CHECK(e.C3 >= prev);
        CHECK_FALSE(e.counterexample);
        prev = e.C3;
    }
}

TEST_CASE("C3 is stable under doubling the sample count") {
    CarlemanConfig cfg;
    cfg.samples = 100;
    cfg.lambdas = {Eigenvalue(0.0, 0.0), Eigenvalue(0.0, 1.0)};
    const CarlemanRun run = run_carleman(cfg);
    CHECK(std::isfinite(run.overall.C3));
    CHECK(run.overall.C3 > 0.0);
    CHECK_FALSE(run.overall.counterexample);
    CHECK(run.stability <= 0.1);
    CHECK(verify_carleman(run).all_pass());
}

TEST_CASE("weight ratio") {
    const double nu = 1.0;
    // S -> infinity with T fixed
    for (double T : {4.0, 10.0, 50.0}) {
        const double S = 1e7 * T;
        const double scaled = weight_ratio_check(T, S, nu, 0.0).lhs * S / T;
        const double expect = std::exp(-nu) * (0.5 - 1.0 / T) / carleman_weight(1.0, nu);
        CHECK(scaled == doctest::Approx(expect).epsilon(1e-5));
        CHECK(weight_ratio_limit(T, nu) == doctest::Approx(expect).epsilon(1e-14));
    }
    // increasing in T at fixed S
    double prev = 0.0;
    for (double T = 3.0; T < 60.0; T *= 1.5) {
        const double v = weight_ratio_check(T, 1e5, nu, 0.0).lhs;
        CHECK(v > prev);
        prev = v;
    }
    const WeightSweep sw = weight_ratio_sweep(nu);
    CHECK(sw.c_n == doctest::Approx(0.116141).epsilon(1e-5));
    CHECK(verify_weight_ratio(sw, nu).all_pass());
    for (std::size_t i = 0; i < sw.T.size(); ++i) CHECK(weight_ratio_check(sw.T[i], sw.S[i], nu, sw.c_n).pass);
    CHECK_THROWS_AS(weight_ratio_sweep(nu, 2.0), DomainError);
}

TEST_CASE("energy inequality on a constant") {
    EnergyField f;
    f.u = [](double, double) { return cplx(2.0); };
    f.grad = [](double, double) { return std::array<cplx, 2>{}; };
    f.V_abs = [](double, double) { return 1.0; };
    f.W_abs = [](double, double) { return 0.0; };
    const CaccioppoliResult c = caccioppoli_check(f, 0.3, -0.2, 0.7);
    CHECK(c.lhs == 0.0);
    CHECK(c.mass == doctest::Approx(4.0 * kPi * 1.4 * 1.4).epsilon(1e-10));
    CHECK(c.pass);
}

TEST_CASE("ball quadrature against e^{-r}") {
    EnergyField f;
    f.u = [](double x, double y) { return cplx(std::exp(-std::hypot(x, y))); };
    f.grad = [](double x, double y) {
        const double r = std::hypot(x, y), e = std::exp(-r);
        if (r == 0.0) return std::array<cplx, 2>{};
        return std::array<cplx, 2>{cplx(-e * x / r), cplx(-e * y / r)};
    };
    f.V_abs = [](double, double) { return 0.0; };
    f.W_abs = [](double, double) { return 0.0; };
    const double r = 1.5;
    const CaccioppoliResult c = caccioppoli_check(f, 0.0, 0.0, r);
    const double lhs = 0.5 * kPi * (1.0 - std::exp(-2.0 * r) * (1.0 + 2.0 * r));
    const double mass = 0.5 * kPi * (1.0 - std::exp(-4.0 * r) * (1.0 + 4.0 * r));
    CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(c.mass == doctest::Approx(mass).epsilon(1e-10));
    CHECK(c.K == doctest::Approx(lhs / (mass / (r * r))).epsilon(1e-10));
}

TEST_CASE("energy inequality on the constructions") {
    MeshkovOptions o;
    o.lambda = Eigenvalue(0.0, 1.0);
    o.annuli = 2;
    const PiecewiseSolution s = build_meshkov(o);
    const auto& spec = s.annuli.front().spec;
    const double r0 = spec.at(3.0);
    const CaccioppoliResult m =
        caccioppoli_check(meshkov_field(s, s.log_M(r0).first), r0, 0.0, 0.5 * std::pow(spec.rho, spec.alpha));
    CHECK(std::isfinite(m.K));
    CHECK(m.pass);

    const RadialSolution rs = assemble(Eigenvalue(-1.0, 0.0), PotentialDecay{1.6, 0.0, 1.0, 0.0}, CaseKindVW::Vcase);
    const CaccioppoliResult q = caccioppoli_check(radial_field(rs), 3.0 * rs.R_m, 0.0, 0.5 * rs.R_m);
    CHECK(std::isfinite(q.K));
    CHECK(q.pass);
}
