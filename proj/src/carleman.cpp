#include "uclab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "uclab/parallel.hpp"
#include "uclab/smoothstep.hpp"

namespace uclab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Nodes and weights of a composite Gauss rule on [a, b].
template <int Points>
void composite(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
    using rule = boost::math::quadrature::gauss<double, Points>;
    const auto& abs = rule::abscissa();
    const auto& wts = rule::weights();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h, s = 0.5 * h;
        for (std::size_t i = 0; i < abs.size(); ++i) {
            if (abs[i] == 0.0) {
                x.push_back(c);
                w.push_back(s * wts[i]);
                continue;
            }
            x.push_back(c - s * abs[i]);
            w.push_back(s * wts[i]);
            x.push_back(c + s * abs[i]);
            w.push_back(s * wts[i]);
        }
    }
}

}  // namespace

std::array<cplx, 3> TestFunction::profile(double r) const {
    if (r <= r_in || r >= r_out) return {0.0, 0.0, 0.0};
    const double d = ramp_width();
    const Step a = ramp_up(r, r_in, r_in + d);
    const Step b = ramp_down(r, r_out - d, r_out);
    const double B = a.v * b.v;
    const double B1 = a.d1 * b.v + a.v * b.d1;
    const double B2 = a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2;
    const double P = std::pow(r / r_out, power);
    const double P1 = power * P / r;
    const double P2 = power * (power - 1.0) * P / (r * r);
    return {amplitude * (P * B), amplitude * (P1 * B + P * B1), amplitude * (P2 * B + 2.0 * P1 * B1 + P * B2)};
}

cplx TestFunction::value(double x, double y) const {
    const double r = std::hypot(x, y), th = std::atan2(y, x);
    return profile(r)[0] * std::exp(I * (ell * th));
}

std::array<cplx, 2> TestFunction::grad(double x, double y) const {
    const double r = std::hypot(x, y), th = std::atan2(y, x);
    const auto g = profile(r);
    const cplx e = std::exp(I * (ell * th));
    const double c = std::cos(th), s = std::sin(th);
    const cplx ang = I * double(ell) * g[0] / r;
    return {e * (g[1] * c - ang * s), e * (g[1] * s + ang * c)};
}

cplx TestFunction::laplacian(double x, double y) const {
    const double r = std::hypot(x, y), th = std::atan2(y, x);
    const auto g = profile(r);
    return std::exp(I * (ell * th)) * (g[2] + g[1] / r - double(ell) * ell * g[0] / (r * r));
}

TestFunction sample_test_function(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    TestFunction f;
    f.r_in = 0.1 + 4.9 * unit_draw(rng);
    const double room = 5.5 - f.r_in;
    f.r_out = f.r_in + room * (0.1 + 0.9 * unit_draw(rng));
    f.ell = static_cast<int>(rng() % 33);
    const double phase = 2.0 * kPi * unit_draw(rng);
    f.amplitude = std::polar(0.5 + unit_draw(rng), phase);
    return f;
}

double ProbeSample::ratio() const {
    if (rhs == 0.0) return (lhs_mass + lhs_grad) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return (lhs_mass + lhs_grad) / rhs;
}

double alpha_threshold(const Eigenvalue& lam, double C2) { return C2 * (1.0 + std::sqrt(std::abs(lam.value))); }

namespace {

struct Integrals {
    double mass = 0.0, grad = 0.0, rhs = 0.0;
};

// Common log scale: the peak of w^(-2 alpha) |f|^2 r over a fixed grid.
double probe_scale(const TestFunction& f, double alpha, const WeightFunction& w) {
    double L = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < 4000; ++i) {
        const double r = f.r_in + (f.r_out - f.r_in) * i / 4000.0;
        const double g = std::norm(f.profile(r)[0]);
        if (g > 0.0) L = std::max(L, -2.0 * alpha * w.log_value(r) + std::log(g * r));
    }
    if (!std::isfinite(L)) L = 0.0;
    return L;
}

struct RadialIntegrand {
    const TestFunction& f;
    double alpha;
    const Eigenvalue& lam;
    const WeightFunction& w;
    double L;

    Integrals at(double r) const {
        const auto g = f.profile(r);
        const double lw = w.log_value(r);
        const double base = std::exp(-2.0 * alpha * lw - L) * 2.0 * kPi * r;
        const double l2 = double(f.ell) * f.ell;
        const cplx op = g[2] + g[1] / r - l2 * g[0] / (r * r) + lam.value * g[0];
        Integrals out;
        out.mass = std::pow(alpha, 3) * base * std::exp(-2.0 * lw) * std::norm(g[0]);
        out.grad = alpha * base * (std::norm(g[1]) + l2 * std::norm(g[0]) / (r * r));
        out.rhs = base * std::norm(op);
        return out;
    }
};

// Piecewise integrals over the inner ramp, the plateau and the outer ramp.
std::array<Integrals, 3> radial_pieces(const RadialIntegrand& F, int panels) {
    const auto& f = F.f;
    const double d = f.ramp_width();
    const double cuts[4] = {f.r_in, f.r_in + d, f.r_out - d, f.r_out};
    std::array<Integrals, 3> out{};
    for (int p = 0; p < 3; ++p) {
        std::vector<double> x, w;
        composite<20>(cuts[p], cuts[p + 1], panels, x, w);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Integrals v = F.at(x[i]);
            out[p].mass += w[i] * v.mass;
            out[p].grad += w[i] * v.grad;
            out[p].rhs += w[i] * v.rhs;
        }
    }
    return out;
}

Integrals total(const std::array<Integrals, 3>& p) {
    Integrals t;
    for (const auto& q : p) {
        t.mass += q.mass;
        t.grad += q.grad;
        t.rhs += q.rhs;
    }
    return t;
}

double rel_change(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

struct Refined {
    std::array<Integrals, 3> pieces;
    int panels;
    double change;
};

Refined refine(const RadialIntegrand& F, double tol) {
    int panels = 4;
    auto prev = radial_pieces(F, panels);
    double change = 1.0;
    while (panels < 4096) {
        auto next = radial_pieces(F, 2 * panels);
        const Integrals a = total(prev), b = total(next);
        change = std::max({rel_change(a.mass, b.mass), rel_change(a.grad, b.grad), rel_change(a.rhs, b.rhs)});
        prev = next;
        panels *= 2;
        if (change < tol) break;
    }
    return {prev, panels, change};
}

}  // namespace

ProbeSample probe(const TestFunction& f, double alpha, const Eigenvalue& lam, const ProbeOptions& opt) {
    if (!(alpha > 0.0)) throw DomainError("probe: alpha must be positive");
    if (!(f.r_in > 0.0 && f.r_out > f.r_in && f.r_out < 6.0)) throw DomainError("probe: support must lie in (0, 6)");
    const WeightFunction w(opt.nu);
    ProbeSample s;
    s.alpha = alpha;
    s.lambda = lam;
    s.below_threshold = !(alpha > alpha_threshold(lam, opt.C2));
    s.log_scale = probe_scale(f, alpha, w);
    if (f.amplitude == cplx(0.0)) return s;
    const RadialIntegrand F{f, alpha, lam, w, s.log_scale};
    const Refined R = refine(F, opt.rel_tol);
    const Integrals t = total(R.pieces);
    s.lhs_mass = t.mass;
    s.lhs_grad = t.grad;
    s.rhs = t.rhs;
    s.panels = R.panels;
    s.step_change = R.change;
    if (!std::isfinite(s.lhs_mass) || !std::isfinite(s.lhs_grad) || !std::isfinite(s.rhs))
        throw DomainError("probe: weighted integrals exceed the representable range");
    return s;
}

ProbeSample probe_2d(const TestFunction& f, double alpha, const Eigenvalue& lam, const ProbeOptions& opt,
                     int radial_nodes) {
    const WeightFunction w(opt.nu);
    ProbeSample s;
    s.alpha = alpha;
    s.lambda = lam;
    s.below_threshold = !(alpha > alpha_threshold(lam, opt.C2));
    s.log_scale = probe_scale(f, alpha, w);
    const double d = f.ramp_width();
    const double cuts[4] = {f.r_in, f.r_in + d, f.r_out - d, f.r_out};
    std::vector<double> x, wr;
    const int panels = std::max(1, radial_nodes / (3 * 15));
    for (int p = 0; p < 3; ++p) composite<15>(cuts[p], cuts[p + 1], panels, x, wr);
    const int nth = 4 * (f.ell + 2) + 16;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = x[i];
        const double lw = w.log_value(r);
        const double base = std::exp(-2.0 * alpha * lw - s.log_scale) * r * wr[i] * (2.0 * kPi / nth);
        for (int t = 0; t < nth; ++t) {
            const double th = 2.0 * kPi * t / nth;
            const double X = r * std::cos(th), Y = r * std::sin(th);
            const cplx v = f.value(X, Y);
            const auto g = f.grad(X, Y);
            const cplx op = f.laplacian(X, Y) + lam.value * v;
            s.lhs_mass += std::pow(alpha, 3) * base * std::exp(-2.0 * lw) * std::norm(v);
            s.lhs_grad += alpha * base * (std::norm(g[0]) + std::norm(g[1]));
            s.rhs += base * std::norm(op);
        }
    }
    return s;
}

double rhs_transition_share(const TestFunction& f, double alpha, const Eigenvalue& lam, const ProbeOptions& opt) {
    const WeightFunction w(opt.nu);
    const RadialIntegrand F{f, alpha, lam, w, probe_scale(f, alpha, w)};
    const auto R = refine(F, opt.rel_tol);
    const double tot = R.pieces[0].rhs + R.pieces[1].rhs + R.pieces[2].rhs;
    return tot == 0.0 ? 0.0 : (R.pieces[0].rhs + R.pieces[2].rhs) / tot;
}

C3Estimate estimate_C3(const std::vector<ProbeSample>& samples) {
    C3Estimate e;
    e.samples = samples.size();
    for (const auto& s : samples) {
        if (s.rhs == 0.0 && s.lhs_mass + s.lhs_grad > 0.0) e.counterexample = true;
        e.C3 = std::max(e.C3, s.ratio());
    }
    return e;
}

CarlemanRun run_carleman(const CarlemanConfig& cfg) {
    if (cfg.samples < 1) throw DomainError("carleman: at least one sample");
    CarlemanRun run;
    run.config = cfg;
    const int N2 = 2 * cfg.samples;
    for (const auto& lam : cfg.lambdas)
        for (double a : cfg.alphas)
            for (int s = 1; s <= N2; ++s) {
                CarlemanRow row;
                row.seed = static_cast<std::uint64_t>(s);
                row.f = sample_test_function(row.seed);
                row.s.alpha = a;
                row.s.lambda = lam;
                run.rows.push_back(row);
            }
    parallel_for(run.rows.size(), [&](std::size_t i) {
        auto& row = run.rows[i];
        row.s = probe(row.f, row.s.alpha, row.s.lambda, cfg.probe);
    });
    std::vector<ProbeSample> first, all;
    for (const auto& row : run.rows) {
        all.push_back(row.s);
        if (row.seed <= static_cast<std::uint64_t>(cfg.samples)) first.push_back(row.s);
    }
    run.overall = estimate_C3(first);
    run.doubled = estimate_C3(all);
    run.stability = run.overall.C3 > 0.0 ? std::abs(run.doubled.C3 - run.overall.C3) / run.overall.C3
                                         : std::numeric_limits<double>::infinity();
    return run;
}

void CarlemanRun::write_csv(std::ostream& os) const {
    os << std::setprecision(12);
    os << "lambda_re,lambda_im,alpha,seed,r_in,r_out,ell,lhs_mass,lhs_grad,rhs,log_scale,ratio,panels\n";
    for (const auto& r : rows)
        os << r.s.lambda.value.real() << ',' << r.s.lambda.value.imag() << ',' << r.s.alpha << ',' << r.seed << ','
           << r.f.r_in << ',' << r.f.r_out << ',' << r.f.ell << ',' << r.s.lhs_mass << ',' << r.s.lhs_grad << ','
           << r.s.rhs << ',' << r.s.log_scale << ',' << r.s.ratio() << ',' << r.s.panels << '\n';
}

nlohmann::json CarlemanRun::summary() const {
    using nlohmann::json;
    json by = json::array();
    for (const auto& lam : config.lambdas)
        for (double a : config.alphas) {
            std::vector<ProbeSample> sel;
            for (const auto& r : rows)
                if (r.s.alpha == a && r.s.lambda.value == lam.value &&
                    r.seed <= static_cast<std::uint64_t>(config.samples))
                    sel.push_back(r.s);
            by.push_back({{"lambda", json::array({lam.value.real(), lam.value.imag()})},
                          {"alpha", a},
                          {"C3", estimate_C3(sel).C3}});
        }
    return {{"C3", overall.C3},
            {"C3_doubled", doubled.C3},
            {"doubling_change", stability},
            {"samples", config.samples},
            {"nu", config.probe.nu},
            {"C2", config.probe.C2},
            {"counterexample", overall.counterexample || doubled.counterexample},
            {"by_alpha_lambda", by}};
}

VerificationReport verify_carleman(const CarlemanRun& run) {
    VerificationReport rep;
    const double C3 = run.overall.C3;
    rep.add_flag("c3_finite", "alpha^3 int w^(-2-2a)|f|^2 + a int w^(-2a)|grad f|^2 <= C3 int w^(-2a)|Delta f + lambda f|^2",
                 std::isfinite(C3) && C3 > 0.0, C3, "empirical C3 = max ratio");
    rep.add("c3_doubling", "C3 stable when the sample count doubles", run.stability, 0.10, 0.0, Sense::AtMost,
            "C3(N) = " + std::to_string(C3) + ", C3(2N) = " + std::to_string(run.doubled.C3));
    rep.add_flag("no_counterexample", "no sample with rhs = 0 and lhs > 0",
                 !run.overall.counterexample && !run.doubled.counterexample);
    rep.add("sample_count", "at least 100 test functions", run.config.samples, 100.0, 0.0, Sense::AtLeast);
    double worst_step = 0.0;
    bool threshold_ok = true;
    for (const auto& r : run.rows) {
        worst_step = std::max(worst_step, r.s.step_change);
        threshold_ok = threshold_ok && !r.s.below_threshold;
    }
    rep.add("quadrature_step_halving", "weighted integrals invariant under halving the radial step", worst_step, 0.0,
            1e-8);
    rep.add_flag("alpha_precondition", "alpha > C2 (1 + sqrt|lambda|) for every sample", threshold_ok);
    return rep;
}

AlphaScan alpha_scan(const std::vector<double>& alphas, const Eigenvalue& lam, int samples, const ProbeOptions& opt) {
    AlphaScan out;
    out.alpha = alphas;
    out.C3.assign(alphas.size(), 0.0);
    parallel_for(alphas.size(), [&](std::size_t i) {
        std::vector<ProbeSample> v;
        for (int s = 1; s <= samples; ++s) v.push_back(probe(sample_test_function(s), alphas[i], lam, opt));
        out.C3[i] = estimate_C3(v).C3;
    });
    out.stable_from = alphas.empty() ? 0.0 : alphas.back();
    for (std::size_t i = alphas.size(); i-- > 1;) {
        if (rel_change(out.C3[i], out.C3[i - 1]) >= 0.10) break;
        out.stable_from = alphas[i - 1];
    }
    return out;
}

WeightRatio weight_ratio_check(double T, double S, double nu, double c_n) {
    if (!(T > 0.0 && S > 0.0)) throw DomainError("weight ratio: T and S must be positive");
    const WeightFunction w(nu);
    const double a = 1.0 + 1.0 / S;
    const double len = (0.5 * T - 1.0) / S;  // b - a without cancellation
    // Difference of w by direct quadrature avoids cancelling two nearly equal erf values.
    const double diff = boost::math::quadrature::gauss<double, 20>::integrate(
        [nu, a](double u) { return std::exp(-nu * (a + u) * (a + u)); }, 0.0, len);
    WeightRatio out;
    out.lhs = std::log1p(diff / w(a));
    out.rhs = c_n * T / S;
    out.pass = out.lhs >= out.rhs * (1.0 - 1e-12);
    return out;
}

double weight_ratio_limit(double T, double nu) {
    return std::exp(-nu) * (0.5 - 1.0 / T) / WeightFunction(nu)(1.0);
}

WeightSweep weight_ratio_sweep(double nu, double T_star, double T_max, int points) {
    if (!(T_star > 2.0)) throw DomainError("weight ratio: T_star must exceed 2 (the ratio vanishes at T = 2)");
    WeightSweep out;
    out.c_n = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double T = T_star * std::pow(T_max / T_star, points == 1 ? 0.0 : double(i) / (points - 1));
        const double S = T * T * T;
        const double scaled = (S / T) * weight_ratio_check(T, S, nu, 0.0).lhs;
        out.T.push_back(T);
        out.S.push_back(S);
        out.scaled.push_back(scaled);
        out.c_n = std::min(out.c_n, scaled);
    }
    return out;
}

VerificationReport verify_weight_ratio(const WeightSweep& sweep, double nu) {
    VerificationReport rep;
    rep.add("c_n_positive", "log[w(1 + T/2S)/w(1 + 1/S)] >= c_n T/S with c_n > 0", sweep.c_n, 0.0, 0.0,
            Sense::AtLeast, "measured infimum of (S/T) log-ratio");
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sweep.T.size(); ++i) {
        const auto r = weight_ratio_check(sweep.T[i], sweep.S[i], nu, sweep.c_n);
        worst = std::min(worst, r.rhs > 0.0 ? r.lhs / r.rhs : std::numeric_limits<double>::infinity());
    }
    rep.add("self_consistency", "lhs / (c_n T/S) >= 1 over the sweep with the measured c_n", worst, 1.0, 1e-12,
            Sense::AtLeast);
    const double T0 = sweep.T.front(), T1 = sweep.T.back();
    const WeightSweep fine = weight_ratio_sweep(nu, T0, T1, 2 * static_cast<int>(sweep.T.size()) - 1);
    rep.add("c_n_grid_stability", "c_n unchanged when the T grid is refined", rel_change(fine.c_n, sweep.c_n), 0.0,
            1e-6);
    bool monotone = true;
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        const double lhs = weight_ratio_check(2.0 + 0.5 * i, 1e6, nu, 0.0).lhs;
        monotone = monotone && lhs > prev;
        prev = lhs;
    }
    rep.add_flag("monotone_in_T", "log-ratio increases with T at fixed S", monotone);
    const double T = 10.0, S = 1e10;
    const double scaled = (S / T) * weight_ratio_check(T, S, nu, 0.0).lhs;
    rep.add("series_limit", "(S/T) log-ratio -> e^{-nu} (1/2 - 1/T) / w(1) as T/S -> 0",
            rel_change(scaled, weight_ratio_limit(T, nu)), 0.0, 1e-8);
    return rep;
}

CaccioppoliResult caccioppoli_check(const EnergyField& f, double x0, double y0, double r, int radial_nodes,
                                    int angular_nodes) {
    if (!(r > 0.0)) throw DomainError("caccioppoli: radius must be positive");
    CaccioppoliResult out;
    out.r = r;
    auto ball = [&](double radius, bool gradient) {
        std::vector<double> s, w;
        composite<20>(0.0, radius, std::max(1, radial_nodes / 20), s, w);
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (int t = 0; t < angular_nodes; ++t) {
                const double th = 2.0 * kPi * t / angular_nodes;
                const double x = x0 + s[i] * std::cos(th), y = y0 + s[i] * std::sin(th);
                double v;
                if (gradient) {
                    const auto g = f.grad(x, y);
                    v = std::norm(g[0]) + std::norm(g[1]);
                } else {
                    v = std::norm(f.u(x, y));
                    out.M = std::max(out.M, f.V_abs(x, y));
                    out.N = std::max(out.N, f.W_abs(x, y));
                }
                sum += v * s[i] * w[i] * (2.0 * kPi / angular_nodes);
            }
        }
        return sum;
    };
    out.lhs = ball(r, true);
    out.mass = ball(2.0 * r, false);
    out.K = out.lhs / ((1.0 / (r * r) + out.M + out.N * out.N) * out.mass);
    double c_eta = 0.0;
    for (int i = 1; i < 2000; ++i) c_eta = std::max(c_eta, smooth_step(i / 2000.0).d1);
    out.K_max = std::max(8.0 * c_eta * c_eta, 2.0);
    out.pass = std::isfinite(out.K) && out.K <= out.K_max;
    return out;
}

EnergyField meshkov_field(const PiecewiseSolution& sol, double Lref) {
    const PiecewiseSolution* s = &sol;
    EnergyField f;
    f.u = [s, Lref](double x, double y) { return s->eval_jet(std::hypot(x, y), std::atan2(y, x), Lref).v; };
    f.grad = [s, Lref](double x, double y) {
        const double r = std::hypot(x, y), p = std::atan2(y, x);
        const Jet u = s->eval_jet(r, p, Lref);
        const double c = std::cos(p), sn = std::sin(p);
        return std::array<cplx, 2>{c * u.r - sn * u.p / r, sn * u.r + c * u.p / r};
    };
    f.V_abs = [s](double x, double y) {
        return std::abs(s->lambda.value - s->potential_V(std::hypot(x, y), std::atan2(y, x)));
    };
    f.W_abs = [s](double x, double y) {
        if (s->kind != CaseKindVW::Wcase) return 0.0;
        return s->potential_abs(std::hypot(x, y), std::atan2(y, x));
    };
    return f;
}

EnergyField radial_field(const RadialSolution& sol) {
    const RadialSolution* s = &sol;
    EnergyField f;
    f.u = [s](double x, double y) { return std::exp(s->log_u(std::hypot(x, y))); };
    f.grad = [s](double x, double y) {
        const double r = std::hypot(x, y);
        const cplx g = std::exp(s->log_u(r)) * s->dlog_u(r);
        return std::array<cplx, 2>{g * x / r, g * y / r};
    };
    f.V_abs = [s](double x, double y) { return std::abs(s->lambda.value - s->V(std::hypot(x, y))); };
    f.W_abs = [s](double x, double y) { return std::abs(s->W(std::hypot(x, y))); };
    return f;
}

}  // namespace uclab
