#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uclab/report.hpp"

namespace uclab {

struct PotentialDecay {
    double N = 0.0, P = 0.0, A1 = 1.0, A2 = 1.0;
    bool has_w() const { return A2 > 0.0; }
    void validate() const;
};

struct EngineConstants {
    double C2 = 1.0, C3 = 1.0, C4 = 1.0, C5 = 1.0;
    double c_n = 0.25;
    double w54 = 0.0;      // w(5/4)
    double tildeC4 = 0.0;  // derived from the decay data

    static EngineConstants derive(const PotentialDecay& d, double nu = 1.0, double c_n = 0.25);
    // Constant K in T^delta = K log T.
    double K(int j, const PotentialDecay& d) const;
};

struct UnsupportedRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Exponents {
    double beta_c, beta0;
    bool critical;  // beta_c == 1
};

Exponents beta_exponents(const PotentialDecay& d);

// delta with T^delta = K log T, from log T.
double delta_step(double logT, int j, const PotentialDecay& d, const EngineConstants& c);
// omega with T^(3P-N) + T = T^(3P-N+omega), from log T.
double omega_step(double logT, const PotentialDecay& d);

enum class Branch { First, Second, Clamped };
const char* branch_name(Branch b);

struct SequenceState {
    int j = 0;
    double logT = 0.0;
    double beta = 0.0;      // value used in gamma (after the clamp)
    double beta_raw = 0.0;  // value produced by the recursion
    double beta_m1 = 0.0, beta_raw_m1 = 0.0;  // beta - 1, kept without cancellation
    double gamma = 0.0, delta = 0.0, omega = 0.0;
    double h = 0.0, ell = 0.0;
    Branch branch = Branch::First;
    double logGamma = 0.0;  // log(gamma_1 ... gamma_j)
};

enum class CaseKind { Case1, Case2, Case3, Irregular };

struct CaseTag {
    CaseKind kind = CaseKind::Case1;
    int J = 0;  // first index after the clamp, Case3 only
    std::string name() const;
};

struct Trajectory {
    std::vector<SequenceState> steps;
    CaseTag tag;
    bool truncated = false;
    std::string diagnostic;
    // beta_{m+1} after the last stored step.
    double beta_next = 0.0, beta_next_m1 = 0.0;
    double logT_next = 0.0;

    double Gamma(int j) const;  // product gamma_1 ... gamma_j (1 for j = 0)
    void write_csv(std::ostream& os) const;
};

// strict = false keeps iterating through delta_j <= 0 (diagnostics only); gamma_j <= 1 always truncates.
Trajectory iterate(const PotentialDecay& d, const EngineConstants& c, double logT1, int maxSteps, bool strict = true);

// Case classification from the decay data alone.
CaseKind expected_case(const PotentialDecay& d);

int choose_m(double logR, const PotentialDecay& d, const CaseTag& tag);

struct T1Solution {
    double logT1;
    double residual;  // |log(T1^Gamma_m) - log R|
    Trajectory trajectory;
};

// Smallest log T1 at which the trajectory of length m is well defined.
double min_logT1(const PotentialDecay& d, const EngineConstants& c);
T1Solution solve_T1(double logR, const PotentialDecay& d, const EngineConstants& c, int m, bool strict = true);

struct CriticalDiagnostic {
    std::vector<double> logR, logT1;
    std::vector<int> m;
    bool decreasing = false;
};

// beta_c = 1: solve T1 with m = ceil(log R / (loglog R)^2) for each R.
CriticalDiagnostic critical_breakdown(const std::vector<double>& logR, const PotentialDecay& d,
                                      const EngineConstants& c);

struct Envelope {
    Exponents exps;
    CaseTag tag;
    int m = 0;
    double logT1 = 0.0;
    double C6 = 1.0, C7 = 0.0, tildeC5 = 1.0;
    double log_bound = 0.0;  // log of the lower bound for M(R)
    double beta_next = 0.0;  // beta_{m+1}
    double beta_gap = 0.0, gap_bound = 0.0;  // beta_{m+1} - beta_0 against (C6 - 1) loglog R / log R
    bool loglog_form = false;
    std::string diagnostic;
    Trajectory trajectory;
};

Envelope envelope(double logR, const PotentialDecay& d, const EngineConstants& c);

// log of C5 exp(-C4 T1^beta1 log T1).
double base_case_log_bound(double logT1, const PotentialDecay& d, const EngineConstants& c);
// C6 for beta_c > 1 along the trajectory, see implementation.
double c6_upper(const PotentialDecay& d, CaseKind kind, double gamma1);

// Geometric partial sums S_k(2Q) = 1 + 2Q + ... + (2Q)^k.
double S_sum(double twoQ, int k);

struct HatValues {
    double S, S_prev, beta_hat, gamma_hat, V;
};

// Hat sequences at index j (counted from the start of the relevant regime).
// Case1 uses Q = P and starts at 2; Case2/Case3 use Q = N and start at 4/3.
HatValues hat_sequences(const PotentialDecay& d, CaseKind kind, int j);

// Subset expansion of Gamma_j for a trajectory without switching.
double gamma_expansion(const std::vector<double>& delta, double twoQ, double a, int j);
// Expansion of Gamma_{J-2+j}/Gamma_{J-2} in Case 3.
double gamma_expansion_c3(const std::vector<double>& eps, double twoN, double Delta, int j);

struct TrajectoryCheckOptions {
    double telescoping_tol = 1e-12;
    double expansion_tol = 1e-10;
    int expansion_max_j = 12;
};

VerificationReport verify_trajectory(const Trajectory& t, const PotentialDecay& d,
                                     const TrajectoryCheckOptions& opt = {});

}  // namespace uclab
