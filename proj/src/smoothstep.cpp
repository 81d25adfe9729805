#include "uclab/smoothstep.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace uclab {

Step smooth_step(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0};
    const double u = 1.0 - t;
    const double g = 1.0 / t - 1.0 / u;
    const double g1 = -1.0 / (t * t) - 1.0 / (u * u);
    const double g2 = 2.0 / (t * t * t) - 2.0 / (u * u * u);
    if (g > 700.0) return {0.0, 0.0, 0.0};
    if (g < -700.0) return {1.0, 0.0, 0.0};
    const double e = std::exp(g);
    const double s = 1.0 / (1.0 + e);
    const double q = e / ((1.0 + e) * (1.0 + e));  // s (1 - s) without cancellation
    Step out;
    out.v = s;
    out.d1 = -q * g1;
    out.d2 = q * (1.0 - 2.0 * s) * g1 * g1 - q * g2;
    return out;
}

Step ramp_up(double x, double a, double b) {
    const double w = b - a;
    Step s = smooth_step((x - a) / w);
    s.d1 /= w;
    s.d2 /= w * w;
    return s;
}

// Uses s(1 - t) = 1 - s(t) so the tail keeps full relative precision.
Step ramp_down(double x, double a, double b) {
    const double w = b - a;
    Step s = smooth_step((b - x) / w);
    s.d1 /= -w;
    s.d2 /= w * w;
    return s;
}

double smooth_step_integral(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 0.5 + (x - 1.0);
    // s(t) + s(1 - t) = 1 folds the upper half onto the lower one.
    if (x > 0.5) return x - 0.5 + smooth_step_integral(1.0 - x);
    auto f = [](double t) { return smooth_step(t).v; };
    using rule = boost::math::quadrature::gauss<double, 30>;
    return rule::integrate(f, 0.0, 0.5 * x) + rule::integrate(f, 0.5 * x, x);
}

Step bump(double t) {
    if (t <= -1.0 || t >= 1.0) return {0.0, 0.0, 0.0};
    const double q = 1.0 - t * t;
    const double g = -1.0 / q;
    if (g < -700.0) return {0.0, 0.0, 0.0};
    const double g1 = -2.0 * t / (q * q);
    const double g2 = -2.0 / (q * q) - 8.0 * t * t / (q * q * q);
    const double b = std::exp(g);
    return {b, b * g1, b * (g2 + g1 * g1)};
}

}  // namespace uclab
