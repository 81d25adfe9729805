#pragma once

namespace uclab {

// Value with first and second derivative.
struct Step {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

// C-infinity step 1 / (1 + exp(1/t - 1/(1-t))): 0 for t <= 0, 1 for t >= 1.
Step smooth_step(double t);

// Rises from 0 at x <= a to 1 at x >= b.
Step ramp_up(double x, double a, double b);
// Falls from 1 at x <= a to 0 at x >= b.
Step ramp_down(double x, double a, double b);

// Integral of smooth_step over [0, x] for x in [0, 1]; equals 1/2 at x = 1.
double smooth_step_integral(double x);

// exp(-1/(1-t^2)) on (-1, 1), zero outside.
Step bump(double t);

}  // namespace uclab
