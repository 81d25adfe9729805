#include <cmath>
#include <numbers>

#include "doctest.h"
#include "uclab/engine.hpp"
#include "uclab/scalar.hpp"

using namespace uclab;

TEST_CASE("beta exponents") {
    Exponents e = beta_exponents(PotentialDecay{0.0, 0.0, 1.0, 1.0});
    CHECK(e.beta_c == 2.0);
    CHECK(e.beta0 == 2.0);
    e = beta_exponents(PotentialDecay{1.0, 1.0, 1.0, 1.0});
    CHECK(e.beta_c == doctest::Approx(2.0 / 3.0));
    CHECK(e.beta0 == 1.0);
    CHECK_FALSE(e.critical);
    e = beta_exponents(PotentialDecay{0.5, 0.5, 1.0, 1.0});
    CHECK(e.beta_c == doctest::Approx(1.0));
    CHECK(e.beta0 == doctest::Approx(1.0));
    CHECK(e.critical);
    // (4 - 2N)/3 with N = 1/4
    CHECK(beta_exponents(PotentialDecay{0.25, 0.75, 1.0, 1.0}).beta0 == doctest::Approx(7.0 / 6.0));
}

TEST_CASE("delta step") {
    const PotentialDecay d{0.25, 0.75, 1.0, 1.0};
    EngineConstants c;
    c.c_n = 1.0;
    CHECK(c.K(2, d) == 27.0 / 8.0);
    // K log T = 1
    CHECK(std::abs(delta_step(8.0 / 27.0, 2, d, c)) < 1e-15);
    // T = e^e
    const double logT = std::numbers::e;
    const double delta = delta_step(logT, 2, d, c);
    CHECK(delta == doctest::Approx(std::log(27.0 / 8.0 * std::numbers::e) / std::numbers::e).epsilon(1e-15));
    CHECK(std::exp(delta * logT) == doctest::Approx(27.0 / 8.0 * logT).epsilon(1e-14));
    CHECK_THROWS_AS(delta_step(0.0, 2, d, c), DomainError);
}

TEST_CASE("delta step bracket for large T") {
    // delta log T / loglog T = 1 + log K / loglog T, inside [sqrt3/2, 2/sqrt3] once loglog T >= log K / (2/sqrt3 - 1).
    const PotentialDecay d{0.25, 0.75, 1.0, 1.0};
    const EngineConstants c = EngineConstants::derive(d);
    const double start = std::log(c.K(2, d)) / (2.0 / std::sqrt(3.0) - 1.0);
    for (double ll : {start, start + 1.0, 2.0 * start, 100.0}) {
        const double logT = std::exp(ll);
        const double ratio = delta_step(logT, 2, d, c) * logT / ll;
        CHECK(ratio >= std::sqrt(3.0) / 2.0);
        CHECK(ratio <= 2.0 / std::sqrt(3.0) + 1e-12);
    }
}

TEST_CASE("omega step") {
    // 3P - N = 1: T + T = 2T
    const PotentialDecay d1{0.5, 0.5, 1.0, 1.0};
    CHECK(omega_step(std::log(50.0), d1) == doctest::Approx(std::log(2.0) / std::log(50.0)).epsilon(1e-14));
    // 3P - N = 2, T = 100
    const PotentialDecay d2{1.0, 1.0, 1.0, 1.0};
    const double w = omega_step(std::log(100.0), d2);
    CHECK(w == doctest::Approx(std::log1p(1.0 / 100.0) / std::log(100.0)).epsilon(1e-14));
    CHECK(std::exp((2.0 + w) * std::log(100.0)) == doctest::Approx(1e4 + 100.0).epsilon(1e-13));
    // omega <= delta_1 for large T
    const EngineConstants c = EngineConstants::derive(d2);
    for (double lt : {50.0, 500.0, 5000.0}) CHECK(omega_step(lt, d2) <= delta_step(lt, 1, d2, c));
}

TEST_CASE("trajectory without W uses the second branch") {
    const PotentialDecay d{0.25, 0.0, 1.0, 0.0};
    const EngineConstants c = EngineConstants::derive(d);
    const Trajectory t = iterate(d, c, 40.0, 10);
    REQUIRE(t.steps.size() == 10);
    for (const auto& s : t.steps) CHECK(s.branch == Branch::Second);
    const auto& s1 = t.steps.front();
    CHECK(s1.beta == doctest::Approx(4.0 / 3.0));
    CHECK(s1.gamma == doctest::Approx(1.0 + 2.0 * d.N + 3.0 * s1.delta).epsilon(1e-15));
    CHECK(t.tag.kind == CaseKind::Case2);
}

TEST_CASE("Case 1 trajectory approaches 2 - 2P") {
    const PotentialDecay d{0.75, 0.25, 1.0, 1.0};
    CHECK(expected_case(d) == CaseKind::Case1);
    const EngineConstants c = EngineConstants::derive(d);
    const Trajectory t = iterate(d, c, 1e6, 30);
    REQUIRE(t.steps.size() == 30);
    CHECK(t.tag.kind == CaseKind::Case1);
    CHECK(std::abs(t.steps.back().beta - 1.5) < 1e-3);
    CHECK(std::abs(t.steps.back().beta - 1.5) < std::abs(t.steps[3].beta - 1.5));
}

TEST_CASE("Case 3 trajectory clamps at J - 1") {
    const PotentialDecay d{0.25, 0.75, 1.0, 1.0};
    CHECK(expected_case(d) == CaseKind::Case3);
    const EngineConstants c = EngineConstants::derive(d);
    const Trajectory t = iterate(d, c, 50.0, 14);
    REQUIRE(t.tag.kind == CaseKind::Case3);
    const int J = t.tag.J;
    REQUIRE(J >= 2);
    const auto& s = t.steps[J - 2];
    CHECK(s.branch == Branch::Clamped);
    CHECK(s.beta == doctest::Approx(s.h).epsilon(1e-15));
    for (int j = J; j <= static_cast<int>(t.steps.size()); ++j) CHECK(t.steps[j - 1].beta <= t.steps[j - 1].ell);
}

TEST_CASE("choose m") {
    CaseTag c1;
    c1.kind = CaseKind::Case1;
    // log(1/2P) = 1, loglog R = 3
    CHECK(choose_m(std::exp(3.0), PotentialDecay{0.1, 1.0 / (2.0 * std::numbers::e), 1.0, 1.0}, c1) == 3);
    CaseTag c2;
    c2.kind = CaseKind::Case2;
    CHECK(choose_m(std::exp(2.1), PotentialDecay{0.25, 0.0, 1.0, 0.0}, c2) == 4);
    CHECK_THROWS_AS(choose_m(10.0, PotentialDecay{0.75, 0.0, 1.0, 0.0}, c2), DomainError);
}

TEST_CASE("solve T1") {
    const PotentialDecay d{0.25, 0.0, 1.0, 0.0};
    const EngineConstants c = EngineConstants::derive(d);
    // m = 3 needs R well above T_min^Gamma_3
    const double logR = std::log(1e30);
    const T1Solution s0 = solve_T1(logR, d, c, 0);
    CHECK(s0.logT1 == logR);

    const T1Solution s = solve_T1(logR, d, c, 3);
    // forward oracle: log T1 * gamma_1 gamma_2 gamma_3 = log R
    const Trajectory t = iterate(d, c, s.logT1, 3);
    double G = 1.0;
    for (const auto& st : t.steps) G *= st.gamma;
    CHECK(std::abs(std::expm1(s.logT1 * G - logR)) < 1e-8);

    double prev = -1.0;
    for (double lt : {s.logT1 * 0.9, s.logT1, s.logT1 * 1.1, s.logT1 * 2.0}) {
        const double end = iterate(d, c, lt, 3).logT_next;
        CHECK(end > prev);
        prev = end;
    }
}

TEST_CASE("envelope forms") {
    {
        const PotentialDecay d{0.25, 0.75, 1.0, 1.0};
        const EngineConstants c = EngineConstants::derive(d);
        const double logR = std::log(1e12);
        const Envelope e = envelope(logR, d, c);
        CHECK_FALSE(e.loglog_form);
        CHECK(e.exps.beta0 == doctest::Approx(7.0 / 6.0));
        CHECK(e.beta_gap <= e.gap_bound);
        const double llR = std::log(logR);
        CHECK(e.log_bound == doctest::Approx(std::log(e.tildeC5) - e.C7 * std::exp(e.exps.beta0 * logR + e.C6 * llR)));
        CHECK(e.C7 == doctest::Approx(c.tildeC4 / 2.0));
        CHECK(e.tildeC5 == doctest::Approx(std::sqrt(c.C5)));
        // C6 = 1 turns R^beta0 (log R)^C6 into R^beta0 log R
        CHECK(std::exp(e.exps.beta0 * logR + 1.0 * llR) ==
              doctest::Approx(std::pow(1e12, e.exps.beta0) * logR).epsilon(1e-12));
    }
    {
        const PotentialDecay d{2.0, 2.0, 1.0, 1.0};
        const Envelope e = envelope(std::log(1e9), d, EngineConstants::derive(d));
        CHECK(e.loglog_form);
        CHECK(e.exps.beta0 == 1.0);
    }
    {
        const PotentialDecay d{0.5, 0.5, 1.0, 1.0};
        CHECK_THROWS_AS(envelope(std::log(1e12), d, EngineConstants::derive(d)), UnsupportedRegime);
    }
}

TEST_CASE("base case bound") {
    const PotentialDecay d{0.25, 0.75, 1.0, 1.0};
    EngineConstants c = EngineConstants::derive(d);
    c.C4 = 0.5;
    c.C5 = 3.0;
    const double lt = 2.0;
    CHECK(base_case_log_bound(lt, d, c) == doctest::Approx(std::log(3.0) - 0.5 * std::exp(2.0 * lt) * lt));
}

TEST_CASE("hat sequences") {
    // 2P = 1: S_j = j + 1
    for (int j = 0; j <= 10; ++j) CHECK(S_sum(1.0, j) == j + 1.0);
    const PotentialDecay d{0.3, 0.35, 1.0, 1.0};
    for (int j = 1; j <= 20; ++j) {
        const HatValues h = hat_sequences(d, CaseKind::Case1, j);
        CHECK(h.gamma_hat <= 1.0 + std::pow(2.0 * d.P, j) + 1e-15);
        CHECK(h.S == doctest::Approx(S_sum(0.7, j)));
    }
    for (double Q : {0.1, 0.25, 0.4, 0.5, 0.8}) {
        for (int j = 1; j <= 30; ++j) {
            const double lhs = S_sum(2 * Q, j) * S_sum(2 * Q, 1) - S_sum(2 * Q, j - 1) * 2 * Q;
            CHECK(lhs == doctest::Approx(S_sum(2 * Q, j + 1)).epsilon(1e-14));
        }
    }
    // beta_hat_{j+1} = 2 - 2P / gamma_hat_j
    const HatValues h3 = hat_sequences(d, CaseKind::Case1, 3), h2 = hat_sequences(d, CaseKind::Case1, 2);
    CHECK(h3.beta_hat == doctest::Approx(2.0 - 2.0 * d.P / h2.gamma_hat));
}

TEST_CASE("trajectory checks") {
    const PotentialDecay d{0.75, 0.25, 1.0, 1.0};
    const EngineConstants c = EngineConstants::derive(d);
    const Trajectory t = iterate(d, c, 200.0, 14);
    const VerificationReport r = verify_trajectory(t, d);
    REQUIRE(r.find("telescoping") != nullptr);
    CHECK(r.find("telescoping")->measured < 1e-12);
    CHECK(r.find("gamma_expansion")->measured < 1e-10);
    CHECK(r.all_pass());

    // Gamma_1 = S_1 + a delta_1 with a = 1 in Case 1
    std::vector<double> delta{0.0, t.steps[0].delta};
    CHECK(gamma_expansion(delta, 2 * d.P, 1.0, 1) == doctest::Approx(1.0 + 2 * d.P + t.steps[0].delta));
    CHECK(t.steps[0].gamma == doctest::Approx(1.0 + 2 * d.P + t.steps[0].delta));
}

TEST_CASE("critical diagnostic is well defined") {
    // At desk scale m = 3 for all three radii; the solved log T1 is reported, and the trend is judged by the
    // acceptance run rather than asserted here.
    const PotentialDecay d{0.5, 0.5, 1.0, 1.0};
    const EngineConstants c = EngineConstants::derive(d);
    const CriticalDiagnostic diag = critical_breakdown({std::log(1e6), std::log(1e9), std::log(1e12)}, d, c);
    REQUIRE(diag.logT1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const double ll = std::log(diag.logR[i]);
        CHECK(diag.m[i] == static_cast<int>(std::ceil(diag.logR[i] / (ll * ll))));
        // The endpoint map jumps where a step changes branch; the solution either hits log R or brackets it.
        const double lt = diag.logT1[i], eps = 1e-9 * lt;
        const double mid = iterate(d, c, lt, diag.m[i], false).logT_next;
        const double lo = iterate(d, c, lt - eps, diag.m[i], false).logT_next;
        const double hi = iterate(d, c, lt + eps, diag.m[i], false).logT_next;
        const bool hit = std::abs(mid - diag.logR[i]) <= 1e-8 * diag.logR[i];
        CHECK((hit || (lo < diag.logR[i] && hi > diag.logR[i])));
    }
    CHECK(diag.decreasing == (diag.logT1[2] < diag.logT1[1] && diag.logT1[1] < diag.logT1[0]));
}
