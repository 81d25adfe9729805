#include "uclab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace uclab {

namespace {

// f' = sum_p a_p r^(-p): a_0 = c1, a_1 = c2, a_p = (1-p) c_{p+1}.
std::vector<lcplx> derivative_coeffs(const LaurentExpansion& f) {
    int top = 1;
    for (const auto& [k, c] : f.c_neg) top = std::max(top, k - 1);
    std::vector<lcplx> a(top + 1, lcplx{});
    a[0] = f.c_linear;
    a[1] = f.c_log;
    for (const auto& [k, c] : f.c_neg) a[k - 1] = static_cast<long double>(2 - k) * c;
    return a;
}

cplx to_d(lcplx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

cplx LaurentExpansion::value(double r) const {
    const long double x = r;
    lcplx s = c_linear * x + c_log * std::log(x);
    for (const auto& [k, c] : c_neg) s += c * std::pow(x, static_cast<long double>(2 - k));
    return to_d(s);
}

cplx LaurentExpansion::d1(double r) const {
    const long double x = r;
    lcplx s = c_linear + c_log / x;
    for (const auto& [k, c] : c_neg) s += static_cast<long double>(2 - k) * c * std::pow(x, static_cast<long double>(1 - k));
    return to_d(s);
}

cplx LaurentExpansion::d2(double r) const {
    const long double x = r;
    lcplx s = -c_log / (x * x);
    for (const auto& [k, c] : c_neg)
        s += static_cast<long double>((2 - k) * (1 - k)) * c * std::pow(x, static_cast<long double>(-k));
    return to_d(s);
}

cplx residual_value(const ResidualCoeffs& d, double r) {
    const long double x = r;
    lcplx s{};
    for (const auto& [p, c] : d) s += c * std::pow(x, static_cast<long double>(-p));
    return to_d(s);
}

namespace {

// Decaying root in extended precision.
lcplx decaying_root_l(const Eigenvalue& lam) {
    if (lam.nonneg_real()) throw DomainError("radial construction needs lambda off the closed positive real axis");
    const lcplx z(-static_cast<long double>(lam.value.real()), -static_cast<long double>(lam.value.imag()));
    lcplx s = z.imag() == 0.0L ? lcplx(std::sqrt(z.real()), 0.0L) : std::sqrt(z);
    return -s;
}

}  // namespace

cplx decaying_root(const Eigenvalue& lam) {
    if (lam.nonneg_real()) throw DomainError("radial construction needs lambda off the closed positive real axis");
    // principal_sqrt(-lambda) has positive real part here.
    return -principal_sqrt(-lam.value);
}

ResidualCoeffs residual_laurent(const LaurentExpansion& f, const Eigenvalue& lam, double rel_tol) {
    const auto a = derivative_coeffs(f);
    const int top = static_cast<int>(a.size()) - 1;
    const int pmax = std::max(1, 2 * top);
    const long double n1 = f.n_dim - 1.0L;
    std::vector<lcplx> d(pmax + 1, lcplx{});
    const lcplx lamv(lam.value.real(), lam.value.imag());
    for (int p = 0; p <= pmax; ++p) {
        lcplx s = p == 0 ? lamv : lcplx{};
        if (p >= 1 && p - 1 <= top) s += (n1 - (p - 1.0L)) * a[p - 1];
        for (int i = std::max(0, p - top); i <= std::min(p, top); ++i) s += a[i] * a[p - i];
        d[p] = s;
    }
    const double scale = std::max(1.0, std::abs(lam.value));
    if (std::abs(d[0]) > rel_tol * scale)
        throw std::logic_error("residual_laurent: nonzero constant coefficient (c1^2 != -lambda)");
    ResidualCoeffs out;
    const int highest = std::max(1, 2 * (f.order - 1));
    for (int p = 1; p <= pmax; ++p) {
        if (p > highest) {
            if (std::abs(d[p]) > rel_tol * scale)
                throw std::logic_error("residual_laurent: coefficient above the expected top power");
            continue;
        }
        out[p] = d[p];
    }
    return out;
}

std::pair<LaurentExpansion, ResidualCoeffs> base_f1(const Eigenvalue& lam, int n_dim) {
    LaurentExpansion f;
    f.n_dim = n_dim;
    f.order = 1;
    f.c_linear = decaying_root_l(lam);
    ResidualCoeffs d;
    d[1] = (n_dim - 1.0L) * f.c_linear;
    return {f, d};
}

std::pair<LaurentExpansion, ResidualCoeffs> base_f2(const Eigenvalue& lam, int n_dim) {
    auto [f, d] = base_f1(lam, n_dim);
    f.c_log = -(n_dim - 1.0L) / 2.0L;
    f.order = 2;
    return {f, residual_laurent(f, lam)};
}

std::pair<LaurentExpansion, ResidualCoeffs> extend(const LaurentExpansion& f, const ResidualCoeffs& d,
                                                   const Eigenvalue& lam) {
    const int m = f.order;
    if (m < 2) throw DomainError("extend requires m >= 2");
    const auto it = d.find(m);
    const lcplx dm = it == d.end() ? lcplx{} : it->second;
    LaurentExpansion g = f;
    g.c_neg[m + 1] = dm / (2.0L * (m - 1.0L) * f.c_linear);
    g.order = m + 1;
    return {g, residual_laurent(g, lam)};
}

std::pair<LaurentExpansion, ResidualCoeffs> laurent_to_order(int m, const Eigenvalue& lam, int n_dim) {
    if (m < 1) throw DomainError("order must be at least 1");
    if (m == 1) return base_f1(lam, n_dim);
    auto cur = base_f2(lam, n_dim);
    while (cur.first.order < m) cur = extend(cur.first, cur.second, lam);
    return cur;
}

cplx RadialSolution::log_u(double r) const {
    if (r >= R_m) return f.value(r);
    if (kind == CaseKindVW::Vcase) return f.value(R_m);
    return log_C - lambda.value * r * r / (2.0 * n_dim);
}

cplx RadialSolution::dlog_u(double r) const {
    if (r >= R_m) return f.d1(r);
    if (kind == CaseKindVW::Vcase) return 0.0;
    return -lambda.value * r / static_cast<double>(n_dim);
}

cplx RadialSolution::d2log_u(double r) const {
    if (r >= R_m) return f.d2(r);
    if (kind == CaseKindVW::Vcase) return 0.0;
    return -lambda.value / static_cast<double>(n_dim);
}

cplx RadialSolution::V(double r) const {
    if (kind != CaseKindVW::Vcase) return 0.0;
    return r >= R_m ? residual_value(d, r) : lambda.value;
}

cplx RadialSolution::W(double r) const {
    if (kind != CaseKindVW::Wcase) return 0.0;
    if (r >= R_m) return residual_value(d, r) / f.d1(r);
    return -lambda.value * r / static_cast<double>(n_dim);
}

void RadialSolution::write_coefficients_csv(std::ostream& os) const {
    os << std::setprecision(17);
    os << "kind,index,re,im\n";
    os << "c,1," << f.c_linear.real() << ',' << f.c_linear.imag() << '\n';
    os << "c,2," << f.c_log.real() << ',' << f.c_log.imag() << '\n';
    for (const auto& [k, c] : f.c_neg) os << "c," << k << ',' << c.real() << ',' << c.imag() << '\n';
    for (const auto& [p, c] : d) os << "d," << p << ',' << c.real() << ',' << c.imag() << '\n';
}

void RadialSolution::write_profile_csv(std::ostream& os, int samples) const {
    os << std::setprecision(17);
    os << "r,re_log_u,im_log_u,abs_potential\n";
    for (int i = 0; i <= samples; ++i) {
        const double r = r_max * (0.5 + i) / (samples + 1.0);
        const cplx lu = log_u(r);
        const double pot = kind == CaseKindVW::Vcase ? std::abs(V(r)) : std::abs(W(r));
        os << r << ',' << lu.real() << ',' << lu.imag() << ',' << pot << '\n';
    }
}

RadialSolution assemble(int m, const Eigenvalue& lam, const PotentialDecay& decay, CaseKindVW kind,
                        const RadialOptions& opt) {
    (void)decay;
    RadialSolution s;
    s.kind = kind;
    s.lambda = lam;
    s.m = m;
    s.n_dim = opt.n_dim;
    std::tie(s.f, s.d) = laurent_to_order(m, lam, opt.n_dim);
    s.C_m = std::abs(static_cast<double>(s.f.c_linear.real())) / 2.0;

    // R_m: smallest grid radius beyond which Re f' <= -C_m and Re f <= -C_m r on the sampled grid.
    std::vector<double> grid;
    for (double r = 1.0; r <= 1e4; r *= 1.01) grid.push_back(r);
    std::size_t first_ok = grid.size();
    for (std::size_t i = grid.size(); i-- > 0;) {
        const double r = grid[i];
        if (s.f.d1(r).real() <= -s.C_m && s.f.value(r).real() <= -s.C_m * r)
            first_ok = i;
        else
            break;
    }
    if (first_ok == grid.size()) throw DomainError("assemble: no radius with the required decay found below 1e4");
    s.R_m = grid[first_ok];
    s.r_max = opt.truncation_factor * s.R_m;
    if (kind == CaseKindVW::Wcase) {
        if (std::abs(s.f.d1(s.R_m)) < s.C_m) throw DomainError("assemble: |d_r u / u| below C_m (decay derivative)");
        s.log_C = s.f.value(s.R_m) + lam.value * s.R_m * s.R_m / (2.0 * opt.n_dim);
    }
    return s;
}

RadialSolution assemble(const Eigenvalue& lam, const PotentialDecay& decay, CaseKindVW kind, const RadialOptions& opt) {
    const double rate = kind == CaseKindVW::Vcase ? decay.N : decay.P;
    const int m = std::max(1, static_cast<int>(std::ceil(rate)));
    return assemble(m, lam, decay, kind, opt);
}

double radial_fd_residual(const RadialSolution& s, double r, double h) {
    const cplx l0 = s.log_u(r);
    cplx v[7];
    for (int i = -3; i <= 3; ++i) v[i + 3] = std::exp(s.log_u(r + i * h) - l0);
    const cplx d1 = (-v[0] + 9.0 * v[1] - 45.0 * v[2] + 45.0 * v[4] - 9.0 * v[5] + v[6]) / (60.0 * h);
    const cplx d2 = (2.0 * v[0] - 27.0 * v[1] + 270.0 * v[2] - 490.0 * v[3] + 270.0 * v[4] - 27.0 * v[5] + 2.0 * v[6]) /
                    (180.0 * h * h);
    const cplx lap = d2 + (s.n_dim - 1.0) / r * d1;
    const cplx lam = s.lambda.value;
    const cplx res = lap + lam - s.V(r) - s.W(r) * d1;
    return std::abs(res) / (std::abs(lap) + std::abs(lam));
}

VerificationReport verify_radial(const RadialSolution& s, double decay_rate) {
    VerificationReport rep;
    const double R = s.R_m;
    const double h = std::min(1e-2, 0.05 / std::max(1.0, static_cast<double>(std::abs(s.f.c_linear))));

    double worst = 0.0;
    const int samples = 400;
    for (int i = 0; i <= samples; ++i) {
        const double r = R + 4.0 * h + (10.0 * R - R - 4.0 * h) * i / samples;
        worst = std::max(worst, radial_fd_residual(s, r, h));
    }
    rep.add("outer_fd_residual", "Delta u + lambda u = V u (resp. W . grad u) outside R_m", worst, 0.0, 1e-8);

    double inner = 0.0;
    for (int i = 1; i < 50; ++i) {
        const double r = R * i / 50.0;
        if (r - 3.0 * h <= 0.0 || r + 3.0 * h >= R) continue;
        if (s.kind == CaseKindVW::Vcase) {
            // u constant, V = lambda: the residual vanishes identically.
            inner = std::max(inner, std::abs(s.lambda.value - s.V(r)));
        } else {
            inner = std::max(inner, radial_fd_residual(s, r, h));
        }
    }
    rep.add("inner_residual", "V = lambda (resp. W = -(lambda r/n) e_r) inside R_m", inner, 0.0, 1e-8);

    // sup r^m |pot| over doubling windows.
    std::vector<double> sups;
    for (double a = R; 2.0 * a <= s.r_max + 1e-9; a *= 2.0) {
        double sup = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double r = a * (1.0 + i / 100.0);
            const double pot = s.kind == CaseKindVW::Vcase ? std::abs(s.V(r)) : std::abs(s.W(r));
            sup = std::max(sup, std::pow(r, s.m) * pot);
        }
        sups.push_back(sup);
    }
    double ratio = 1.0;
    for (std::size_t i = 1; i < sups.size(); ++i) {
        const double a = sups[i - 1], b = sups[i];
        ratio = std::max(ratio, std::max(a, b) / std::min(a, b));
    }
    rep.add("potential_power_stability", "sup r^m |potential| stable across doubling windows", ratio, 1.5, 0.0,
            Sense::AtMost, "m = " + std::to_string(s.m));
    double sup_rate = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = R + (s.r_max - R) * i / 400.0;
        const double pot = s.kind == CaseKindVW::Vcase ? std::abs(s.V(r)) : std::abs(s.W(r));
        sup_rate = std::max(sup_rate, std::pow(r, decay_rate) * pot);
    }
    rep.add("potential_decay_rate", "sup <x>^rate |potential| finite", sup_rate,
            std::numeric_limits<double>::max(), 0.0);

    double min_der = std::numeric_limits<double>::infinity();
    double g_near = -std::numeric_limits<double>::infinity(), g_far = g_near;
    for (int i = 0; i <= 800; ++i) {
        const double r = R + (s.r_max - R) * i / 800.0;
        min_der = std::min(min_der, std::abs(s.dlog_u(r)));
        const double g = s.log_u(r).real() + s.C_m * r;
        if (r <= 10.0 * R) g_near = std::max(g_near, g); else g_far = std::max(g_far, g);
    }
    rep.add("decay_derivative", "|d_r u / u| >= C_m for r >= R_m", min_der, s.C_m, 0.0, Sense::AtLeast);
    rep.add("exp_decay_bounded", "|u| e^{C_m r} bounded (no growth past 10 R_m)", g_far - g_near, 0.0, 1e-12);
    rep.add("exp_decay_at_Rm", "|u(r)| <= exp(-C_m r) for r >= R_m", g_near, 0.0, 1e-12);
    return rep;
}

}  // namespace uclab
