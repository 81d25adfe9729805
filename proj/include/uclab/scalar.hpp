#pragma once

#include <stdexcept>
#include <string>

#include "uclab/jet.hpp"

namespace uclab {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Which lower-order term carries the construction.
enum class CaseKindVW { Vcase, Wcase };

// Eigenvalue with the argument taken in [-pi, pi).
struct Eigenvalue {
    cplx value{};
    double argument = 0.0;

    Eigenvalue() = default;
    Eigenvalue(cplx z);
    Eigenvalue(double re, double im) : Eigenvalue(cplx(re, im)) {}

    bool nonneg_real() const { return value.imag() == 0.0 && value.real() >= 0.0; }
    bool is_zero() const { return value == cplx(0.0); }
};

cplx principal_sqrt(cplx z);
cplx clog1p(cplx w);

// Value, first and second radial derivative of a function of r.
struct Radial {
    cplx f, d1, d2;
    Jet jet() const { return Jet::radial(f, d1, d2); }
};

// log mu_n(r) with radial derivatives.
Radial log_mu(double n, const Eigenvalue& lam, double r);
cplx mu(double n, const Eigenvalue& lam, double r);

// phi_{a,b}(r) with radial derivatives; identically zero for lambda = 0.
Radial phi_ab_jet(double a, double b, const Eigenvalue& lam, double r);
cplx phi_ab(double a, double b, const Eigenvalue& lam, double r);
cplx phi_ab_derivative(double a, double b, const Eigenvalue& lam, double r);

// w(r) = int_0^r exp(-nu s^2) ds.
class WeightFunction {
public:
    explicit WeightFunction(double nu = 1.0);
    double operator()(double r) const;
    double derivative(double r) const;
    double log_value(double r) const;
    double nu() const { return nu_; }
    // sup over (0, 6) of max(w/r, r/w).
    double comparability_constant() const;

private:
    double nu_, scale_;
};

double carleman_weight(double nu, double r);

}  // namespace uclab
