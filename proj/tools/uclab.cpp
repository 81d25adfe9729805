#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uclab/carleman.hpp"
#include "uclab/engine.hpp"
#include "uclab/meshkov.hpp"
#include "uclab/parallel.hpp"
#include "uclab/radial.hpp"
#include "uclab/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uclab;

namespace {

enum Exit { kPass = 0, kUsage = 1, kUnsupported = 2, kGuard = 3, kCheckFailed = 4 };

struct Common {
    int jobs = 0;
    std::string config;
    std::string out = ".";
    unsigned seed = 1;
    bool no_timestamp = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Eigenvalue parse_lambda(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("lambda must be given as re,im: " + s);
    std::size_t a = 0, b = 0;
    double re = 0.0, im = 0.0;
    try {
        re = std::stod(s.substr(0, comma), &a);
        im = std::stod(s.substr(comma + 1), &b);
    } catch (const std::exception&) {
        throw UsageError("lambda must be given as re,im: " + s);
    }
    if (a != comma || b != s.size() - comma - 1 || !std::isfinite(re) || !std::isfinite(im))
        throw UsageError("lambda must be given as re,im: " + s);
    return Eigenvalue(re, im);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad number list: " + s);
        }
    }
    if (out.empty()) throw UsageError("empty number list");
    return out;
}

CaseKindVW parse_case(const std::string& s) {
    if (s == "V" || s == "v") return CaseKindVW::Vcase;
    if (s == "W" || s == "w") return CaseKindVW::Wcase;
    throw UsageError("case must be V or W");
}

fs::path out_path(const Common& c, const std::string& name) {
    fs::create_directories(c.out);
    return fs::path(c.out) / name;
}

void write_json(const Common& c, const std::string& name, const json& doc) {
    std::ofstream os(out_path(c, name));
    os << doc.dump(2) << '\n';
}

json document(const Common& c, const VerificationReport& rep, const json& extra = json::object()) {
    json doc = report_document(rep, c.seed, !c.no_timestamp);
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
    return doc;
}

void print_report(const VerificationReport& rep) {
    for (const auto& e : rep.entries())
        std::cout << (e.pass ? "  pass  " : "  FAIL  ") << e.id << "  measured " << e.measured << "  bound "
                  << e.bound << '\n';
    std::cout << rep.entries().size() - rep.failures() << "/" << rep.entries().size() << " checks pass\n";
}

// Values from --config become option defaults, so flags given on the command line win.
// Keys may sit at top level or under the subcommand name. Arrays for repeatable options are returned
// for after-parse filling, since a default string would be split on the commas inside "re,im".
using Deferred = std::map<CLI::Option*, std::vector<std::string>>;

Deferred apply_config(CLI::App& app, int argc, char** argv) {
    Deferred deferred;
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
    }
    if (path.empty()) return deferred;
    std::ifstream is(path);
    if (!is) throw UsageError("cannot read config file " + path);
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    auto as_string = [](const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
        if (v.is_array()) {
            std::string s;
            for (const auto& x : v) s += (s.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
            return s;
        }
        return v.dump();
    };
    auto apply = [&](CLI::App* sub, const json& obj) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (it.value().is_object()) continue;
            CLI::Option* opt = nullptr;
            try {
                opt = sub->get_option("--" + it.key());
            } catch (const CLI::OptionNotFound&) {
                continue;
            }
            if (it.value().is_array() && opt->get_items_expected_max() > 1) {
                std::vector<std::string> items;
                for (const auto& x : it.value()) items.push_back(x.is_string() ? x.get<std::string>() : x.dump());
                deferred[opt] = items;
                continue;
            }
            opt->default_str(as_string(it.value()));
            opt->default_val(as_string(it.value()));
        }
    };
    for (CLI::App* sub : app.get_subcommands({})) {
        apply(sub, cfg);
        if (cfg.contains(sub->get_name()) && cfg[sub->get_name()].is_object()) apply(sub, cfg[sub->get_name()]);
    }
    return deferred;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--jobs", c.jobs, "worker threads (default UCLAB_JOBS or hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--config", c.config, "JSON config file; flags override its values");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--seed", c.seed, "seed for sampled points");
    sub->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from JSON reports");
}

// ---- envelope ----

struct EnvelopeArgs {
    double N = 0.25, P = 0.75, A1 = 1.0, A2 = 1.0, R = 1e12, nu = 1.0, c_n = 0.25;
};

int cmd_envelope(const Common& c, const EnvelopeArgs& a) {
    const PotentialDecay d{a.N, a.P, a.A1, a.A2};
    try {
        d.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (!(a.R > std::exp(1.0))) throw UsageError("R must exceed e");
    if (!(a.c_n > 0.0)) throw UsageError("c_n must be positive");
    const EngineConstants k = EngineConstants::derive(d, a.nu, a.c_n);
    const Exponents ex = beta_exponents(d);
    std::cout << std::setprecision(10);
    std::cout << "beta_c = " << ex.beta_c << "\nbeta_0 = " << ex.beta0 << '\n';
    Envelope env;
    try {
        env = envelope(std::log(a.R), d, k);
    } catch (const UnsupportedRegime& e) {
        std::cout << "unsupported regime: " << e.what() << '\n';
        VerificationReport rep;
        rep.add_flag("supported_regime", "beta_c != 1", false, ex.beta_c, e.what());
        write_json(c, "envelope.json", document(c, rep, {{"beta_c", ex.beta_c}, {"beta0", ex.beta0}}));
        return kUnsupported;
    }
    std::cout << "case = " << env.tag.name() << "\nm = " << env.m << "\nlog T1 = " << env.logT1 << '\n';
    if (!env.diagnostic.empty()) std::cout << "note: " << env.diagnostic << '\n';
    std::cout << "\n j      log T_j        beta_j        gamma_j        delta_j\n";
    for (const auto& s : env.trajectory.steps)
        std::cout << std::setw(2) << s.j << "  " << std::setw(13) << s.logT << "  " << std::setw(12) << s.beta
                  << "  " << std::setw(13) << s.gamma << "  " << std::setw(13) << s.delta << '\n';
    std::cout << "\nC6 = " << env.C6 << "\nlog lower bound for M(R) = " << env.log_bound << '\n';
    if (env.loglog_form)
        std::cout << "envelope: exp(-C7 R (log R)^(C6 loglog R))\n";
    else
        std::cout << "envelope: exp(-C7 R^beta0 (log R)^C6)\n";

    // Exact identities decide the exit code; the asymptotic bounds need T1 >> 1 and are reported only.
    const VerificationReport full = verify_trajectory(env.trajectory, d);
    VerificationReport rep;
    for (const auto& x : full.entries())
        if (x.id == "telescoping" || x.id.rfind("gamma_expansion", 0) == 0) rep.add(x.id, x.anchor, x.measured, x.bound, x.tolerance);
    if (!env.loglog_form)
        rep.add("envelope_gap", "beta_{m+1} - beta_0 <= (C6 - 1) loglog R / log R", env.beta_gap, env.gap_bound, 0.0);
    json extra = {{"beta_c", ex.beta_c},
                  {"beta0", ex.beta0},
                  {"case", env.tag.name()},
                  {"m", env.m},
                  {"log_T1", env.logT1},
                  {"C6", env.C6},
                  {"C7", env.C7},
                  {"log_bound", env.log_bound},
                  {"loglog_form", env.loglog_form},
                  {"beta_next", env.beta_next},
                  {"diagnostic", env.diagnostic},
                  {"asymptotic_checks", full.to_json()}};
    write_json(c, "envelope.json", document(c, rep, extra));
    std::ofstream csv(out_path(c, "envelope_trajectory.csv"));
    env.trajectory.write_csv(csv);
    std::cout << '\n';
    print_report(rep);
    return rep.all_pass() ? kPass : kCheckFailed;
}

// ---- meshkov ----

struct MeshkovArgs {
    std::string kind = "V";
    std::string lambda = "0,0";
    double rho1 = 100.0, beta0 = 0.0;
    int annuli = 3, points = 10000, field_r = 200, field_phi = 360;
};

int cmd_meshkov(const Common& c, const MeshkovArgs& a) {
    MeshkovOptions mo;
    mo.kind = parse_case(a.kind);
    mo.lambda = parse_lambda(a.lambda);
    mo.rho1 = a.rho1;
    mo.annuli = a.annuli;
    mo.beta0 = a.beta0;
    if (!(a.rho1 > 0.0)) throw UsageError("rho1 must be positive");
    if (a.annuli < 1) throw UsageError("at least one annulus");
    if (a.points < 1) throw UsageError("points must be positive");
    PiecewiseSolution sol;
    try {
        sol = build_meshkov(mo);
    } catch (const GuardFailure& e) {
        std::cout << "guard failure: " << e.what() << '\n';
        VerificationReport rep;
        rep.add_flag("construction_guard", "construction bounds hold", false, 0.0, e.what());
        write_json(c, "meshkov_report.json", document(c, rep));
        return kGuard;
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    MeshkovCheckOptions co;
    co.residual_points = a.points;
    co.seed = c.seed;
    const VerificationReport rep = verify_meshkov(sol, co);
    std::cout << std::setprecision(8) << "case " << a.kind << ", beta0 = " << sol.beta0 << ", n1 = " << sol.n1
              << ", r_max = " << sol.r_max() << '\n';
    for (std::size_t i = 0; i < sol.annuli.size(); ++i) {
        const auto& s = sol.annuli[i].spec;
        std::cout << "  annulus " << i + 1 << ": rho = " << s.rho << ", n = " << s.n << ", k = " << s.k << '\n';
    }
    print_report(rep);
    write_json(c, "meshkov_report.json", document(c, rep, {{"constants", sol.constants_json()}}));
    std::ofstream csv(out_path(c, "meshkov_fields.csv"));
    sol.write_fields_csv(csv, a.field_r, a.field_phi);
    return rep.all_pass() ? kPass : kCheckFailed;
}

// ---- radial ----

struct RadialArgs {
    std::string kind = "V";
    std::string lambda = "-1,0";
    int m = 0;
    double N = 1.6, P = 1.6;
};

int cmd_radial(const Common& c, const RadialArgs& a) {
    const CaseKindVW kind = parse_case(a.kind);
    const Eigenvalue lam = parse_lambda(a.lambda);
    if (lam.nonneg_real()) throw UsageError("lambda must lie off the closed positive real axis");
    if (a.m < 0) throw UsageError("m must be non-negative");
    const PotentialDecay decay{a.N, a.P, kind == CaseKindVW::Vcase ? 1.0 : 0.0, kind == CaseKindVW::Wcase ? 1.0 : 0.0};
    const double rate = kind == CaseKindVW::Vcase ? a.N : a.P;
    if (!(rate > 0.0)) throw UsageError("decay rate must be positive");
    RadialSolution s;
    try {
        s = a.m > 0 ? assemble(a.m, lam, decay, kind) : assemble(lam, decay, kind);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    std::cout << std::setprecision(12) << "m = " << s.m << ", R_m = " << s.R_m << ", C_m = " << s.C_m << '\n';
    std::cout << "  c1 = " << static_cast<cplx>(s.f.c_linear) << "\n  c2 = " << static_cast<cplx>(s.f.c_log) << '\n';
    for (const auto& [k, v] : s.f.c_neg) std::cout << "  c" << k << " = " << static_cast<cplx>(v) << '\n';
    const VerificationReport rep = verify_radial(s, rate);
    print_report(rep);
    write_json(c, "radial_report.json",
               document(c, rep, {{"m", s.m}, {"R_m", s.R_m}, {"C_m", s.C_m}, {"r_max", s.r_max}}));
    std::ofstream coef(out_path(c, "radial_coefficients.csv"));
    s.write_coefficients_csv(coef);
    std::ofstream prof(out_path(c, "radial_profile.csv"));
    s.write_profile_csv(prof);
    return rep.all_pass() ? kPass : kCheckFailed;
}

// ---- carleman ----

struct CarlemanArgs {
    int samples = 100;
    std::string alphas = "10,20,40";
    std::vector<std::string> lambdas{"0,0", "0,1", "4,0"};
    double nu = 1.0, C2 = 3.0, T_star = 4.0, T_max = 100.0;
};

int cmd_carleman(const Common& c, const CarlemanArgs& a) {
    CarlemanConfig cfg;
    if (a.samples < 1) throw UsageError("samples must be positive");
    cfg.samples = a.samples;
    cfg.alphas = parse_list(a.alphas);
    for (double al : cfg.alphas)
        if (!(al > 0.0 && al <= 60.0)) throw UsageError("alpha must lie in (0, 60]");
    cfg.lambdas.clear();
    for (const auto& s : a.lambdas) {
        cfg.lambdas.push_back(parse_lambda(s));
        if (std::abs(cfg.lambdas.back().value) > 25.0) throw UsageError("|lambda| must not exceed 25");
    }
    if (!(a.nu > 0.0)) throw UsageError("nu must be positive");
    if (!(a.T_star > 2.0 && a.T_max > a.T_star)) throw UsageError("need 2 < T_star < T_max");
    cfg.probe.nu = a.nu;
    cfg.probe.C2 = a.C2;
    const CarlemanRun run = run_carleman(cfg);
    VerificationReport rep = verify_carleman(run);
    const WeightSweep sw = weight_ratio_sweep(a.nu, a.T_star, a.T_max);
    rep.merge(verify_weight_ratio(sw, a.nu), "weight");
    json summary = run.summary();
    summary["c_n"] = sw.c_n;
    std::cout << std::setprecision(8) << "C3 = " << run.overall.C3 << " (2N: " << run.doubled.C3
              << ", change " << run.stability << ")\nc_n = " << sw.c_n << '\n';
    print_report(rep);
    write_json(c, "carleman_summary.json", summary);
    write_json(c, "carleman_report.json", document(c, rep, {{"summary", summary}}));
    std::ofstream csv(out_path(c, "carleman_probe.csv"));
    run.write_csv(csv);
    return rep.all_pass() ? kPass : kCheckFailed;
}

// ---- verify-all ----

struct SuiteArgs {
    int points = 10000, samples = 100;
};

int cmd_verify_all(const Common& c, const SuiteArgs& a) {
    if (a.points < 1 || a.samples < 1) throw UsageError("points and samples must be positive");
    SuiteOptions so;
    so.seed = c.seed;
    so.meshkov_points = a.points;
    so.carleman_samples = a.samples;
    const auto outcomes = run_suite(so);
    for (const auto& o : outcomes)
        std::cout << (o.report.all_pass() ? "PASS" : "FAIL") << "  criterion " << o.id << ": " << o.title << " ("
                  << o.report.entries().size() - o.report.failures() << "/" << o.report.entries().size() << ")\n";
    const VerificationReport rep = consolidate(outcomes);
    json criteria = json::array();
    for (const auto& o : outcomes)
        criteria.push_back({{"id", o.id}, {"title", o.title}, {"pass", o.report.all_pass()}});
    write_json(c, "verify_all.json", document(c, rep, {{"criteria", criteria}}));
    return rep.all_pass() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unique continuation lab: constructions, exponent iteration and Carleman probes"};
    app.require_subcommand(1);

    Common common;
    EnvelopeArgs env;
    MeshkovArgs mk;
    RadialArgs rad;
    CarlemanArgs car;
    SuiteArgs suite;

    auto* e = app.add_subcommand("envelope", "exponent iteration and lower-bound envelope");
    add_common(e, common);
    e->add_option("--N", env.N, "decay rate of V");
    e->add_option("--P", env.P, "decay rate of W");
    e->add_option("--A1", env.A1, "size of V");
    e->add_option("--A2", env.A2, "size of W (0 for no W)");
    e->add_option("--R", env.R, "radius");
    e->add_option("--nu", env.nu, "weight parameter");
    e->add_option("--c-n", env.c_n, "weight-ratio constant");

    auto* m = app.add_subcommand("meshkov", "annulus construction with complex potential");
    add_common(m, common);
    m->add_option("--case", mk.kind, "V or W");
    m->add_option("--lambda", mk.lambda, "eigenvalue re,im")->allow_extra_args(false);
    m->add_option("--rho1", mk.rho1, "first annulus radius");
    m->add_option("--annuli", mk.annuli, "number of annuli");
    m->add_option("--beta0", mk.beta0, "construction exponent (0: default for the case)");
    m->add_option("--points", mk.points, "residual sample points");
    m->add_option("--field-r", mk.field_r, "radial samples in the field CSV");
    m->add_option("--field-phi", mk.field_phi, "angular samples in the field CSV");

    auto* r = app.add_subcommand("radial", "radial Laurent construction");
    add_common(r, common);
    r->add_option("--case", rad.kind, "V or W");
    r->add_option("--lambda", rad.lambda, "eigenvalue re,im");
    r->add_option("--m", rad.m, "induction order (0: from the decay rate)");
    r->add_option("--N", rad.N, "decay rate of V");
    r->add_option("--P", rad.P, "decay rate of W");

    auto* cm = app.add_subcommand("carleman", "weighted inequality probe");
    add_common(cm, common);
    cm->add_option("--samples", car.samples, "test functions");
    cm->add_option("--alpha", car.alphas, "comma-separated alpha values");
    cm->add_option("--lambda", car.lambdas, "eigenvalues re,im (repeatable)");
    cm->add_option("--nu", car.nu, "weight parameter");
    cm->add_option("--C2", car.C2, "alpha precondition constant");
    cm->add_option("--T-star", car.T_star, "lower end of the weight-ratio sweep");
    cm->add_option("--T-max", car.T_max, "upper end of the weight-ratio sweep");

    auto* v = app.add_subcommand("verify-all", "full acceptance matrix");
    add_common(v, common);
    v->add_option("--points", suite.points, "residual sample points per annulus construction");
    v->add_option("--samples", suite.samples, "Carleman test functions");

    try {
        const Deferred deferred = apply_config(app, argc, argv);
        app.parse(argc, argv);
        for (const auto& [opt, items] : deferred) {
            if (opt->count() > 0) continue;
            opt->add_result(items);
            opt->run_callback();
        }
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kPass : kUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    }

    set_default_jobs(resolve_jobs(common.jobs));
    try {
        if (e->parsed()) return cmd_envelope(common, env);
        if (m->parsed()) return cmd_meshkov(common, mk);
        if (r->parsed()) return cmd_radial(common, rad);
        if (cm->parsed()) return cmd_carleman(common, car);
        if (v->parsed()) return cmd_verify_all(common, suite);
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    } catch (const UnsupportedRegime& err) {
        std::cerr << "unsupported regime: " << err.what() << '\n';
        return kUnsupported;
    } catch (const GuardFailure& err) {
        std::cerr << "guard failure: " << err.what() << '\n';
        return kGuard;
    }
    return kUsage;
}
