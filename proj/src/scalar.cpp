#include "uclab/scalar.hpp"

#include <cmath>
#include <numbers>

namespace uclab {

Eigenvalue::Eigenvalue(cplx z) : value(z) {
    double a = std::arg(z);
    if (a >= std::numbers::pi) a -= 2.0 * std::numbers::pi;
    argument = a;
}

cplx principal_sqrt(cplx z) {
    if (z.imag() == 0.0) {
        if (z.real() >= 0.0) return {std::sqrt(z.real()), 0.0};
        return {0.0, std::sqrt(-z.real())};
    }
    return std::sqrt(z);
}

cplx clog1p(cplx w) {
    double x = w.real(), y = w.imag();
    double re = 0.5 * std::log1p(2.0 * x + x * x + y * y);
    double im = std::atan2(y, 1.0 + x);
    return {re, im};
}

namespace {

void check_branch(cplx w, const char* what) {
    if (w.imag() == 0.0 && w.real() <= 0.0)
        throw DomainError(std::string(what) + ": argument on the branch cut of the principal square root");
}

}  // namespace

Radial log_mu(double n, const Eigenvalue& lam, double r) {
    if (lam.is_zero() || r == 0.0) {
        if (lam.is_zero()) return {0.0, 0.0, 0.0};
    }
    const cplx l = lam.value;
    const cplx z = l * r * r / (n * n);
    check_branch(1.0 - z, "mu");
    const cplx s = principal_sqrt(1.0 - z);
    const cplx t = z / (1.0 + s);
    Radial out;
    out.f = n * (clog1p(-0.5 * t) + t);
    const cplx ops = 1.0 + s;
    out.d1 = l * r / (n * ops);
    out.d2 = l / (n * ops) + l * l * r * r / (n * n * n * s * ops * ops);
    return out;
}

cplx mu(double n, const Eigenvalue& lam, double r) {
    return std::exp(log_mu(n, lam, r).f);
}

Radial phi_ab_jet(double a, double b, const Eigenvalue& lam, double r) {
    if (lam.is_zero()) return {0.0, 0.0, 0.0};
    const cplx l = lam.value;
    const cplx lr2 = l * r * r;
    check_branch(a * a - lr2, "phi_ab");
    check_branch(b * b - lr2, "phi_ab");
    const cplx A = principal_sqrt(a * a - lr2);
    const cplx B = principal_sqrt(b * b - lr2);
    const cplx AB = A * B;
    Radial out;
    out.f = 0.5 * std::log((A + B) / (a + b));
    out.d1 = -0.5 * l * r / AB;
    out.d2 = -0.5 * l / AB - 0.5 * l * l * r * r * (A * A + B * B) / (AB * AB * AB);
    return out;
}

cplx phi_ab(double a, double b, const Eigenvalue& lam, double r) {
    return phi_ab_jet(a, b, lam, r).f;
}

cplx phi_ab_derivative(double a, double b, const Eigenvalue& lam, double r) {
    return phi_ab_jet(a, b, lam, r).d1;
}

WeightFunction::WeightFunction(double nu) : nu_(nu) {
    if (!(nu > 0.0)) throw DomainError("weight: nu must be positive");
    scale_ = 0.5 * std::sqrt(std::numbers::pi / nu);
}

double WeightFunction::operator()(double r) const {
    return scale_ * std::erf(std::sqrt(nu_) * r);
}

double WeightFunction::derivative(double r) const { return std::exp(-nu_ * r * r); }

double WeightFunction::log_value(double r) const { return std::log((*this)(r)); }

double WeightFunction::comparability_constant() const {
    // w(r)/r decreases from 1 at 0+ to w(6)/6.
    return std::max(1.0, 6.0 / (*this)(6.0));
}

double carleman_weight(double nu, double r) { return WeightFunction(nu)(r); }

}  // namespace uclab
