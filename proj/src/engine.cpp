#include "uclab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "uclab/scalar.hpp"

namespace uclab {

namespace {

constexpr double kCritTol = 1e-12;
constexpr double kBoundedGrowth = 1.01;

double log1pexp(double x) { return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

std::string fmt_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

void PotentialDecay::validate() const {
    if (!(N >= 0.0 && P >= 0.0 && A1 >= 0.0 && A2 >= 0.0))
        throw DomainError("decay data must be nonnegative");
    if (A1 == 0.0 && A2 == 0.0) throw DomainError("decay data: A1 and A2 cannot both vanish");
}

EngineConstants EngineConstants::derive(const PotentialDecay& d, double nu, double c_n) {
    EngineConstants c;
    c.c_n = c_n;
    c.w54 = WeightFunction(nu)(1.25);
    c.tildeC4 = 3.0 * std::pow(4.0, 1.0 + d.P + d.N / 3.0) * c.C3 * std::pow(c.w54, 2.0 / 3.0) *
                (std::pow(d.A1, 2.0 / 3.0) + d.A2 * d.A2);
    return c;
}

double EngineConstants::K(int j, const PotentialDecay& d) const {
    if (j >= 2) return 27.0 / (8.0 * c_n);
    const double denom = std::pow(4.0, 3.0 + d.P + d.N / 3.0) * C3 * std::pow(w54, 2.0 / 3.0) *
                         (std::pow(d.A1, 2.0 / 3.0) + d.A2 * d.A2) * c_n;
    return 18.0 * C4 / denom;
}

Exponents beta_exponents(const PotentialDecay& d) {
    Exponents e;
    e.beta_c = std::max(2.0 - 2.0 * d.P, (4.0 - 2.0 * d.N) / 3.0);
    e.beta0 = std::max(e.beta_c, 1.0);
    e.critical = std::abs(e.beta_c - 1.0) <= kCritTol;
    return e;
}

double delta_step(double logT, int j, const PotentialDecay& d, const EngineConstants& c) {
    if (!(logT > 0.0)) throw DomainError("delta_step: T must exceed 1");
    return std::log(c.K(j, d) * logT) / logT;
}

double omega_step(double logT, const PotentialDecay& d) {
    if (!(logT > 0.0)) throw DomainError("omega_step: T must exceed 1");
    return log1pexp((1.0 - 3.0 * d.P + d.N) * logT) / logT;
}

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::First: return "first";
        case Branch::Second: return "second";
        case Branch::Clamped: return "clamped";
    }
    return "?";
}

std::string CaseTag::name() const {
    switch (kind) {
        case CaseKind::Case1: return "Case1";
        case CaseKind::Case2: return "Case2";
        case CaseKind::Case3: return "Case3(J=" + std::to_string(J) + ")";
        case CaseKind::Irregular: return "Irregular";
    }
    return "?";
}

double Trajectory::Gamma(int j) const {
    if (j <= 0) return 1.0;
    return std::exp(steps.at(j - 1).logGamma);
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "j,logT_j,beta_j,gamma_j,delta_j,omega_j,branch\n";
    for (const auto& s : steps)
        os << s.j << ',' << fmt_double(s.logT) << ',' << fmt_double(s.beta) << ',' << fmt_double(s.gamma) << ','
           << fmt_double(s.delta) << ',' << fmt_double(s.omega) << ',' << branch_name(s.branch) << '\n';
}

Trajectory iterate(const PotentialDecay& d, const EngineConstants& c, double logT1, int maxSteps, bool strict) {
    Trajectory t;
    const bool w = d.has_w();
    // beta - 1 is carried separately; both branches give (beta_{j+1} - 1) = (beta_j - 1 + delta_j) / gamma_j.
    double bm1 = w ? 1.0 : 1.0 / 3.0;
    double logT = logT1;
    double logG = 0.0;
    for (int j = 1; j <= maxSteps; ++j) {
        SequenceState s;
        s.j = j;
        s.logT = logT;
        s.beta_raw = 1.0 + bm1;
        s.beta_raw_m1 = bm1;
        s.delta = delta_step(logT, j, d, c);
        s.omega = omega_step(logT, d);
        s.h = 1.0 + d.P - d.N + s.omega - s.delta;
        s.ell = 1.0 + d.P - d.N + s.omega / 3.0 - s.delta;
        if (strict && !(s.delta > 0.0)) {
            t.truncated = true;
            t.diagnostic = "delta_" + std::to_string(j) + " <= 0: K log T_j <= 1, T_j too small";
            break;
        }
        if (!w) {
            s.branch = Branch::Second;
        } else if (1.0 + bm1 >= s.h) {
            s.branch = Branch::First;
        } else {
            const bool prev_above = !t.steps.empty() && t.steps.back().beta > t.steps.back().h;
            if ((1.0 + bm1 > s.ell) || prev_above) {
                s.branch = Branch::Clamped;
                bm1 = d.P - d.N + s.omega - s.delta;
            } else {
                s.branch = Branch::Second;
            }
        }
        s.beta = 1.0 + bm1;
        s.beta_m1 = bm1;
        if (s.branch == Branch::Second)
            s.gamma = 3.0 * bm1 + 2.0 * d.N + 3.0 * s.delta;
        else
            s.gamma = bm1 + 2.0 * d.P + s.delta;
        if (!(s.gamma > 1.0)) {
            t.truncated = true;
            t.diagnostic = "gamma_" + std::to_string(j) + " <= 1";
            break;
        }
        logG += std::log(s.gamma);
        s.logGamma = logG;
        t.steps.push_back(s);
        bm1 = (bm1 + s.delta) / s.gamma;
        logT *= s.gamma;
    }
    t.beta_next = 1.0 + bm1;
    t.beta_next_m1 = bm1;
    t.logT_next = logT;

    // Case detection from the branch pattern.
    bool any_first = false, any_second = false;
    int clamp_at = 0, clamps = 0;
    bool ordered = true;
    int phase = 0;  // 0: first, 1: after clamp/second
    for (const auto& s : t.steps) {
        if (s.branch == Branch::First) {
            any_first = true;
            if (phase != 0) ordered = false;
        } else if (s.branch == Branch::Clamped) {
            ++clamps;
            clamp_at = s.j;
            if (phase != 0) ordered = false;
            phase = 1;
        } else {
            any_second = true;
            phase = 1;
        }
    }
    if (clamps == 0 && !any_second) {
        t.tag.kind = CaseKind::Case1;
    } else if (clamps == 0 && !any_first) {
        t.tag.kind = CaseKind::Case2;
    } else if (clamps == 1 && ordered) {
        t.tag.kind = CaseKind::Case3;
        t.tag.J = clamp_at + 1;
    } else {
        t.tag.kind = CaseKind::Irregular;
    }
    return t;
}

CaseKind expected_case(const PotentialDecay& d) {
    if (!d.has_w()) return CaseKind::Case2;
    const double first = 2.0 - 2.0 * d.P, second = (4.0 - 2.0 * d.N) / 3.0;
    if (first >= second) return CaseKind::Case1;
    if (d.P > d.N && 3.0 * d.P - d.N > 1.0) return CaseKind::Case3;
    return CaseKind::Case2;
}

int choose_m(double logR, const PotentialDecay& d, const CaseTag& tag) {
    const double llR = std::log(logR);
    const double Q = tag.kind == CaseKind::Case1 ? d.P : d.N;
    if (!(2.0 * Q < 1.0)) throw DomainError("choose_m: requires 2Q < 1 (log(1/2Q) > 0)");
    int m = Q > 0.0 ? static_cast<int>(std::ceil(llR / std::log(1.0 / (2.0 * Q)))) : 1;
    m = std::max(m, 1);
    if (tag.kind == CaseKind::Case3) m += tag.J;
    return m;
}

double min_logT1(const PotentialDecay& d, const EngineConstants& c) {
    return std::max(2.0, (1.0 + 1e-9) / c.K(1, d));
}

T1Solution solve_T1(double logR, const PotentialDecay& d, const EngineConstants& c, int m, bool strict) {
    if (m <= 0) return {logR, 0.0, Trajectory{}};
    auto endpoint = [&](double lt) {
        Trajectory tr = iterate(d, c, lt, m, strict);
        if (tr.truncated || static_cast<int>(tr.steps.size()) < m) return std::numeric_limits<double>::quiet_NaN();
        return tr.logT_next;
    };
    double lo = strict ? min_logT1(d, c) : 1e-3, hi = std::max(logR, lo);
    if (!strict) {
        // Smallest log T1 keeping every gamma_j > 1.
        double a = lo, b = hi;
        if (std::isnan(endpoint(a))) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (std::isnan(endpoint(mid))) a = mid; else b = mid;
            }
            lo = b;
        }
    }
    const double flo = endpoint(lo);
    if (std::isnan(flo) || flo > logR)
        throw DomainError("solve_T1: no root in bracket; R is below T_min^Gamma_m (largeness bound delta_1 > 0 "
                          "forces log T1 >= " + fmt_double(lo) + ")");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = endpoint(mid);
        if (std::isnan(f) || f < logR) lo = mid; else hi = mid;
    }
    double best = hi;
    double fb = endpoint(best);
    const double fl = endpoint(lo);
    if (std::abs(fl - logR) < std::abs(fb - logR)) {
        best = lo;
        fb = fl;
    }
    return {best, std::abs(fb - logR), iterate(d, c, best, m, strict)};
}

double base_case_log_bound(double logT1, const PotentialDecay& d, const EngineConstants& c) {
    const double beta1 = d.has_w() ? 2.0 : 4.0 / 3.0;
    return std::log(c.C5) - c.C4 * std::exp(beta1 * logT1) * logT1;
}

double c6_upper(const PotentialDecay& d, CaseKind kind, double gamma1) {
    double q, cg;
    if (kind == CaseKind::Case1) {
        q = 2.0 * d.P;
        cg = (7.0 + 2.0 * d.P) / (3.0 * (1.0 - 2.0 * d.P));
    } else {
        q = 2.0 * d.N / 3.0;
        cg = (7.0 + 2.0 * d.N) / (1.0 - 2.0 * d.N);
    }
    return 1.0 + q * (1.0 + 2.0 / std::sqrt(3.0) * cg * gamma1);
}

namespace {

// solve_T1 at m, or at the largest smaller m for which T_min^Gamma_m <= R.
T1Solution solve_feasible(double logR, const PotentialDecay& d, const EngineConstants& c, int m,
                          std::string& diagnostic) {
    const int requested = m;
    for (; m > 0; --m) {
        try {
            T1Solution s = solve_T1(logR, d, c, m);
            if (m < requested)
                diagnostic = "R below the largeness threshold for m = " + std::to_string(requested) +
                             "; largest feasible m = " + std::to_string(m) + " used";
            return s;
        } catch (const DomainError&) {
        }
    }
    diagnostic = "R below the largeness threshold for every m >= 1; m = 0 (T1 = R)";
    return solve_T1(logR, d, c, 0);
}

}  // namespace

Envelope envelope(double logR, const PotentialDecay& d, const EngineConstants& c) {
    d.validate();
    Envelope e;
    e.exps = beta_exponents(d);
    if (e.exps.critical)
        throw UnsupportedRegime("beta_c = 1 (min{N, P} = 1/2 boundary): the exponent iteration does not close; "
                                "the required number of steps outgrows the available radius");
    e.C7 = c.tildeC4 / 2.0;
    e.tildeC5 = std::sqrt(c.C5);
    const double llR = std::log(logR);

    if (e.exps.beta_c > 1.0) {
        CaseTag tag;
        tag.kind = expected_case(d);
        if (tag.kind == CaseKind::Case3) {
            Trajectory probe = iterate(d, c, std::max(min_logT1(d, c), logR / 8.0), 60);
            tag.J = probe.tag.kind == CaseKind::Case3 ? probe.tag.J : 2;
        }
        T1Solution sol{};
        for (int pass = 0; pass < 20; ++pass) {
            e.m = choose_m(logR, d, tag);
            sol = solve_feasible(logR, d, c, e.m, e.diagnostic);
            if (tag.kind != CaseKind::Case3) break;
            Trajectory full = iterate(d, c, sol.logT1, e.m + 40);
            const int J = full.tag.kind == CaseKind::Case3 ? full.tag.J : tag.J;
            if (J == tag.J) break;
            tag.J = J;
        }
        e.m = static_cast<int>(sol.trajectory.steps.size());
        e.tag = sol.trajectory.tag;
        if (tag.kind == CaseKind::Case3) e.tag = tag;
        e.logT1 = sol.logT1;
        e.trajectory = sol.trajectory;
        const double gamma1 = e.trajectory.steps.empty() ? 1.0 : e.trajectory.steps.front().gamma;
        e.C6 = c6_upper(d, tag.kind, gamma1);
        e.beta_next = e.m == 0 ? (d.has_w() ? 2.0 : 4.0 / 3.0) : e.trajectory.beta_next;
        e.beta_gap = e.beta_next - e.exps.beta0;
        e.gap_bound = (e.C6 - 1.0) * llR / logR;
        e.log_bound = std::log(e.tildeC5) - e.C7 * std::exp(e.exps.beta0 * logR + e.C6 * llR);
        e.loglog_form = false;
        return e;
    }

    // beta_c < 1: largest m with T_NP^Gamma_m <= R, then T1 solves T1^Gamma_m = R.
    double logTNP = min_logT1(d, c);
    while (delta_step(logTNP, 1, d, c) > 0.5) logTNP *= 2.0;
    e.loglog_form = true;
    if (logR < logTNP) {
        e.m = 0;
        e.logT1 = logR;
        e.diagnostic = "R below T_NP: base case only (m = 0, T1 = R)";
        e.tag.kind = expected_case(d);
    } else {
        Trajectory tr = iterate(d, c, logTNP, 400);
        int m = 0;
        while (m < static_cast<int>(tr.steps.size()) && tr.steps[m].logT * tr.steps[m].gamma <= logR) ++m;
        e.m = m;
        T1Solution sol = solve_T1(logR, d, c, m);
        e.logT1 = sol.logT1;
        e.trajectory = sol.trajectory;
        e.tag = e.trajectory.tag;
    }
    e.beta_next = e.m == 0 ? (d.has_w() ? 2.0 : 4.0 / 3.0) : e.trajectory.beta_next;
    e.C6 = 1.0 + (e.beta_next - 1.0) * logR / (llR * llR);
    e.log_bound = std::log(e.tildeC5) - e.C7 * std::exp(logR + e.C6 * llR * llR);
    return e;
}

CriticalDiagnostic critical_breakdown(const std::vector<double>& logR, const PotentialDecay& d,
                                      const EngineConstants& c) {
    CriticalDiagnostic out;
    for (double lr : logR) {
        const double ll = std::log(lr);
        const int m = static_cast<int>(std::ceil(lr / (ll * ll)));
        const T1Solution s = solve_T1(lr, d, c, m, false);
        out.logR.push_back(lr);
        out.m.push_back(m);
        out.logT1.push_back(s.logT1);
    }
    out.decreasing = true;
    for (std::size_t i = 1; i < out.logT1.size(); ++i)
        if (!(out.logT1[i] < out.logT1[i - 1])) out.decreasing = false;
    return out;
}

double S_sum(double twoQ, int k) {
    if (k < 0) return 0.0;
    double s = 0.0, p = 1.0;
    for (int i = 0; i <= k; ++i) {
        s += p;
        p *= twoQ;
    }
    return s;
}

HatValues hat_sequences(const PotentialDecay& d, CaseKind kind, int j) {
    const bool first = kind == CaseKind::Case1;
    const double Q = first ? d.P : d.N;
    const double twoQ = 2.0 * Q;
    HatValues h;
    h.S = S_sum(twoQ, j);
    h.S_prev = S_sum(twoQ, j - 1);
    h.gamma_hat = h.S / h.S_prev;
    if (j <= 1) {
        h.beta_hat = first ? 2.0 : 4.0 / 3.0;
    } else {
        const double g = S_sum(twoQ, j - 1) / S_sum(twoQ, j - 2);
        h.beta_hat = first ? 2.0 - 2.0 * d.P / g : 4.0 / 3.0 - 2.0 * d.N / (3.0 * g);
    }
    const double Delta = 3.0 * d.P - d.N - 1.0;
    h.V = j == 0 ? 1.0 : 1.0 + S_sum(2.0 * d.N, j - 1) * Delta;
    return h;
}

namespace {

// Sum over subsets {k_1 < ... < k_p} of {1..j} of lead(k_1 - 1) S_{k_2-k_1-1} ... S_{j-k_p} a^p prod eps.
template <class Lead>
double subset_expansion(const std::vector<double>& eps, double twoQ, double a, int j, Lead lead) {
    if (j > 24) throw DomainError("subset expansion limited to j <= 24");
    double total = 0.0;
    const unsigned count = 1u << j;
    for (unsigned mask = 0; mask < count; ++mask) {
        double term = 1.0;
        int prev = 0;
        bool first = true;
        for (int k = 1; k <= j; ++k) {
            if (!(mask & (1u << (k - 1)))) continue;
            term *= (first ? lead(k - 1) : S_sum(twoQ, k - prev - 1)) * a * eps.at(k);
            first = false;
            prev = k;
        }
        term *= first ? lead(j) : S_sum(twoQ, j - prev);
        total += term;
    }
    return total;
}

}  // namespace

double gamma_expansion(const std::vector<double>& delta, double twoQ, double a, int j) {
    return subset_expansion(delta, twoQ, a, j, [&](int k) { return S_sum(twoQ, k); });
}

double gamma_expansion_c3(const std::vector<double>& eps, double twoN, double Delta, int j) {
    return subset_expansion(eps, twoN, 1.0, j,
                            [&](int k) { return k == 0 ? 1.0 : 1.0 + S_sum(twoN, k - 1) * Delta; });
}

VerificationReport verify_trajectory(const Trajectory& t, const PotentialDecay& d, const TrajectoryCheckOptions& opt) {
    VerificationReport rep;
    const auto& st = t.steps;
    const int n = static_cast<int>(st.size());
    const CaseKind kind = t.tag.kind;

    // Telescoping identity; the raw beta_{j+1} is what the recursion produces.
    double tele = 0.0;
    for (int i = 0; i < n; ++i) {
        const double bnext = i + 1 < n ? st[i + 1].beta_raw_m1 : t.beta_next_m1;
        const double lnext = i + 1 < n ? st[i + 1].logT : t.logT_next;
        const double lhs = bnext * lnext - st[i].beta_m1 * st[i].logT;
        const double rhs = st[i].delta * st[i].logT;
        const double scale = std::max({std::abs(bnext * lnext), std::abs(rhs), 1.0});
        tele = std::max(tele, std::abs(lhs - rhs) / scale);
    }
    rep.add("telescoping", "(beta_{j+1}-1) log T_{j+1} = (beta_j-1) log T_j + delta_j log T_j", tele, 0.0,
            opt.telescoping_tol);

    // Strict decrease of beta and gamma.
    double worst_beta = -std::numeric_limits<double>::infinity();
    double worst_gamma = -std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) {
        worst_beta = std::max(worst_beta, st[i + 1].beta - st[i].beta);
        worst_gamma = std::max(worst_gamma, st[i + 1].gamma - st[i].gamma);
    }
    if (n >= 2) {
        rep.add("beta_decreasing", "beta_{j+1} < beta_j", worst_beta, 0.0, 0.0);
        rep.add("gamma_decreasing", "gamma_{j+1} < gamma_j", worst_gamma, 0.0, 0.0);
    }

    const Exponents ex = beta_exponents(d);
    const bool fast = ex.beta_c < 1.0 - kCritTol;
    const bool critical = ex.critical;

    // Expansion of Gamma_j against the running product.
    if (kind == CaseKind::Case1 || kind == CaseKind::Case2) {
        const double twoQ = 2.0 * (kind == CaseKind::Case1 ? d.P : d.N);
        const double a = kind == CaseKind::Case1 ? 1.0 : 3.0;
        std::vector<double> delta(1, 0.0);
        for (const auto& s : st) delta.push_back(s.delta);
        double worst = 0.0;
        double prod = 1.0;
        for (int j = 1; j <= std::min(n, opt.expansion_max_j); ++j) {
            prod *= st[j - 1].gamma;
            const double ex_val = gamma_expansion(delta, twoQ, a, j);
            worst = std::max(worst, std::abs(ex_val - prod) / prod);
        }
        rep.add("gamma_expansion", "Gamma_j = S_j + a sum S..S delta..delta (subset expansion)", worst, 0.0,
                opt.expansion_tol);
    } else if (kind == CaseKind::Case3) {
        const int J = t.tag.J;
        const double Delta = 3.0 * d.P - d.N - 1.0;
        std::vector<double> eps(1, 0.0);
        for (int l = 1; J - 2 + l <= n; ++l) eps.push_back(l == 1 ? st[J - 2].omega : 3.0 * st[J - 3 + l].delta);
        double worst = 0.0, prod = 1.0;
        for (int j = 1; J - 2 + j <= n && j <= opt.expansion_max_j; ++j) {
            prod *= st[J - 3 + j].gamma;
            const double ex_val = gamma_expansion_c3(eps, 2.0 * d.N, Delta, j);
            worst = std::max(worst, std::abs(ex_val - prod) / prod);
        }
        rep.add("gamma_expansion_case3", "Gamma_{J-2+j}/Gamma_{J-2} = V_j + sum V S..S eps..eps", worst, 0.0,
                opt.expansion_tol);
        // Once below ell, the trajectory stays below ell.
        double worst_ell = -std::numeric_limits<double>::infinity();
        for (int i = J - 1; i < n; ++i) worst_ell = std::max(worst_ell, st[i].beta - st[i].ell);
        rep.add("case3_below_ell", "beta_j <= ell_j for all j >= J", worst_ell, 0.0, 0.0);
        rep.add("case3_switch_index", "beta_{J-1} = h_{J-1}", std::abs(st[J - 2].beta - st[J - 2].h), 0.0, 1e-15);
    }

    if (!fast && !critical && (kind == CaseKind::Case1 || kind == CaseKind::Case2 || kind == CaseKind::Case3)) {
        // beta_j <= beta_hat_j + c_Q delta_j and gamma_j / gamma_hat_j^2 <= C8 / C9.
        const bool c1 = kind == CaseKind::Case1;
        const double Q = c1 ? d.P : d.N;
        const double cQ = (4.0 + 8.0 * Q) / (3.0 * (1.0 - 2.0 * Q));
        const double C89 = (1.0 + 2.0 * Q) / (4.0 * Q);
        const int start = kind == CaseKind::Case3 ? t.tag.J : 1;
        double wb = -std::numeric_limits<double>::infinity(), wg = 0.0;
        for (int j = start; j <= n; ++j) {
            const HatValues hv = hat_sequences(d, c1 ? CaseKind::Case1 : CaseKind::Case2, j - start + 1);
            const auto& s = st[j - 1];
            wb = std::max(wb, s.beta - (hv.beta_hat + cQ * s.delta));
            wg = std::max(wg, s.gamma / (hv.gamma_hat * hv.gamma_hat));
        }
        if (start <= n) {
            rep.add("beta_hat_bound", "beta_j <= beta_hat_j + (4+8Q)/(3(1-2Q)) delta_j", wb, 0.0, 0.0);
            if (Q > 0.0) rep.add("gamma_hat_ratio", "gamma_j / gamma_hat_j^2 <= (1+2Q)/(4Q)", wg, C89, 0.0);
        }
    }

    // Auxiliary sequence bounds.
    if (3.0 * d.P - d.N >= 1.0 && n > 0) {
        double w = -std::numeric_limits<double>::infinity();
        for (const auto& s : st) w = std::max(w, s.omega - s.delta);
        rep.add("omega_below_delta", "omega_j <= delta_j when 3P - N >= 1", w, 0.0, 0.0);
    }
    // A running ratio is bounded when its maximum stops growing over the last third of the trajectory.
    auto growth = [](const std::vector<double>& r) {
        if (r.size() < 6) return std::numeric_limits<double>::quiet_NaN();
        const std::size_t cut = (2 * r.size()) / 3;
        const double early = *std::max_element(r.begin(), r.begin() + cut);
        const double all = *std::max_element(r.begin(), r.end());
        return all / early;
    };

    if (fast && (kind == CaseKind::Case1 || kind == CaseKind::Case2 || kind == CaseKind::Case3)) {
        std::vector<double> ratio, tail;
        if (kind == CaseKind::Case3) {
            const int J = t.tag.J;
            const double Delta = 3.0 * d.P - d.N - 1.0;
            const double base = J >= 3 ? st[J - 3].logGamma : 0.0;
            for (int j = 1; J - 2 + j <= n; ++j) {
                const double V = 1.0 + S_sum(2.0 * d.N, j - 1) * Delta;
                ratio.push_back(std::exp(st[J - 3 + j].logGamma - base) / V);
            }
        } else {
            const double twoQ = 2.0 * (kind == CaseKind::Case1 ? d.P : d.N);
            for (int j = 1; j <= n; ++j) ratio.push_back(std::exp(st[j - 1].logGamma) / S_sum(twoQ, j));
        }
        for (int i = 0; i < n; ++i) {
            const double bm1 = i + 1 < n ? st[i + 1].beta_raw_m1 : t.beta_next_m1;
            const double lT = i + 1 < n ? st[i + 1].logT : t.logT_next;
            const double ll = std::log(lT);
            tail.push_back(bm1 * lT / (ll * ll));
        }
        const double C = ratio.empty() ? 0.0 : *std::max_element(ratio.begin(), ratio.end());
        const double C2 = tail.empty() ? 0.0 : *std::max_element(tail.begin(), tail.end());
        if (ratio.size() >= 6 && tail.size() >= 6) {
            rep.add("gamma_S_bounded", "Gamma_j <= C S_j (growth of running max over last third)", growth(ratio),
                    kBoundedGrowth, 0.0, Sense::AtMost, "C = " + fmt_double(C));
            rep.add("tail_loglog_bounded", "(beta_{m+1}-1) log T_{m+1} <= C (loglog T_{m+1})^2 (growth over last third)",
                    growth(tail), kBoundedGrowth, 0.0, Sense::AtMost, "C = " + fmt_double(C2));
        }
    }

    if (critical && n > 0) {
        double c1 = std::numeric_limits<double>::infinity(), c2 = c1;
        for (int j = 1; j <= n; ++j) {
            // delta_j <= 0 satisfies the bound for every c > 0.
            if (st[j - 1].delta > 0.0)
                c1 = std::min(c1, std::exp(st[j - 1].logGamma) / (std::pow(j, 3) * st[j - 1].delta));
            const double bm1 = j < n ? st[j].beta_raw_m1 : t.beta_next_m1;
            c2 = std::min(c2, j * bm1);
        }
        rep.add("critical_gamma_cubic", "Gamma_j >= c j^3 delta_j with c > 0", c1, 0.0, 0.0, Sense::AtLeast);
        rep.add("critical_beta_harmonic", "beta_{j+1} - 1 >= c / j with c > 0", c2, 0.0, 0.0, Sense::AtLeast);
    }
    return rep;
}

}  // namespace uclab
