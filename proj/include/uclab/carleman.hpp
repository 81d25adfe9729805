#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "uclab/meshkov.hpp"
#include "uclab/radial.hpp"
#include "uclab/report.hpp"
#include "uclab/scalar.hpp"

namespace uclab {

// f = A (r/r_out)^power B(r) e^{i ell theta}, B a C-infinity plateau bump on [r_in, r_out]
// with ramps of width (r_out - r_in)/4.
struct TestFunction {
    double r_in = 1.0, r_out = 2.0;
    int ell = 0;
    cplx amplitude{1.0, 0.0};
    int power = 0;

    // g(r) and its first two derivatives.
    std::array<cplx, 3> profile(double r) const;
    double ramp_width() const { return 0.25 * (r_out - r_in); }

    cplx value(double x, double y) const;
    std::array<cplx, 2> grad(double x, double y) const;
    cplx laplacian(double x, double y) const;
};

// Support in (0.1, 5.5), ell in [0, 32]; a deterministic function of the seed.
TestFunction sample_test_function(std::uint64_t seed);

// Integrals are stored as value * exp(-log_scale).
struct ProbeSample {
    double lhs_mass = 0.0;  // alpha^3 int w^(-2-2 alpha) |f|^2
    double lhs_grad = 0.0;  // alpha int w^(-2 alpha) |grad f|^2
    double rhs = 0.0;       // int w^(-2 alpha) |Delta f + lambda f|^2
    double log_scale = 0.0;
    double alpha = 0.0;
    Eigenvalue lambda;
    bool below_threshold = false;  // alpha <= C2 (1 + sqrt|lambda|)
    int panels = 0;                // per piece, after refinement
    double step_change = 0.0;      // relative change under halving the step

    double ratio() const;
};

struct ProbeOptions {
    double nu = 1.0;
    double C2 = 3.0;
    double rel_tol = 1e-10;
};

double alpha_threshold(const Eigenvalue& lam, double C2);

// Radial quadrature with exact angular reduction (single mode), refined until halving the step
// changes the integrals by less than rel_tol.
ProbeSample probe(const TestFunction& f, double alpha, const Eigenvalue& lam, const ProbeOptions& opt = {});
// Independent path: tensor quadrature of the Cartesian closed forms over (r, theta).
ProbeSample probe_2d(const TestFunction& f, double alpha, const Eigenvalue& lam, const ProbeOptions& opt = {},
                     int radial_nodes = 600);

// Share of the rhs integral coming from the two ramp regions.
double rhs_transition_share(const TestFunction& f, double alpha, const Eigenvalue& lam, const ProbeOptions& opt = {});

struct C3Estimate {
    double C3 = 0.0;
    bool counterexample = false;  // rhs = 0 with lhs > 0
    std::size_t samples = 0;
};
C3Estimate estimate_C3(const std::vector<ProbeSample>& samples);

struct CarlemanConfig {
    int samples = 100;  // seeds 1..samples
    std::vector<double> alphas{10.0, 20.0, 40.0};
    std::vector<Eigenvalue> lambdas{Eigenvalue(0.0, 0.0), Eigenvalue(0.0, 1.0), Eigenvalue(4.0, 0.0)};
    ProbeOptions probe;
};

struct CarlemanRow {
    std::uint64_t seed = 0;
    TestFunction f;
    ProbeSample s;
};

struct CarlemanRun {
    CarlemanConfig config;
    std::vector<CarlemanRow> rows;  // ordered by (lambda, alpha, seed)
    C3Estimate overall;
    C3Estimate doubled;   // over seeds 1..2 samples
    double stability = 0.0;  // |C3(2N) - C3(N)| / C3(N)

    void write_csv(std::ostream& os) const;
    nlohmann::json summary() const;
};

// Runs the probe matrix for seeds 1..samples and 1..2 samples.
CarlemanRun run_carleman(const CarlemanConfig& cfg);

VerificationReport verify_carleman(const CarlemanRun& run);

// Smallest alpha in the list from which C3 changes by less than 10% between consecutive entries.
struct AlphaScan {
    std::vector<double> alpha, C3;
    double stable_from = 0.0;
};
AlphaScan alpha_scan(const std::vector<double>& alphas, const Eigenvalue& lam, int samples, const ProbeOptions& opt = {});

// log[w(1 + T/(2S)) / w(1 + 1/S)] against c T / S.
struct WeightRatio {
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
};
WeightRatio weight_ratio_check(double T, double S, double nu, double c_n);
// S/T log-ratio as S -> infinity with T fixed: e^{-nu} (1/2 - 1/T) / w(1).
double weight_ratio_limit(double T, double nu);

struct WeightSweep {
    std::vector<double> T, S, scaled;  // scaled = (S/T) log-ratio
    double c_n = 0.0;                  // infimum of scaled
};
// T log-spaced on [T_star, T_max], S = T^3.
WeightSweep weight_ratio_sweep(double nu, double T_star = 4.0, double T_max = 100.0, int points = 60);

VerificationReport verify_weight_ratio(const WeightSweep& sweep, double nu);

// Field data for the energy inequality int_{B_r} |grad u|^2 <= K (1/r^2 + M + N^2) int_{B_2r} |u|^2
// for Delta u + W.grad u + V u = 0.
struct EnergyField {
    std::function<cplx(double, double)> u;
    std::function<std::array<cplx, 2>(double, double)> grad;
    std::function<double(double, double)> V_abs;
    std::function<double(double, double)> W_abs;
};

struct CaccioppoliResult {
    double r = 0.0;
    double lhs = 0.0;       // int_{B_r} |grad u|^2
    double mass = 0.0;      // int_{B_2r} |u|^2
    double M = 0.0, N = 0.0;
    double K = 0.0;         // lhs / ((1/r^2 + M + N^2) mass)
    double K_max = 0.0;     // max(8 c_eta^2, 2) from the cutoff argument
    bool pass = false;
};

// Ball quadrature in local polar coordinates around (x0, y0).
CaccioppoliResult caccioppoli_check(const EnergyField& f, double x0, double y0, double r, int radial_nodes = 160,
                                    int angular_nodes = 512);

// u scaled by exp(-Lref); V_eff = lambda - V and W_eff = -W.
EnergyField meshkov_field(const PiecewiseSolution& sol, double Lref);
EnergyField radial_field(const RadialSolution& sol);

}  // namespace uclab
