#pragma once

#include "omega/interp.hpp"
#include "omega/thresholds.hpp"

namespace omega {

struct TrailingControls {
    double rel_tol = 1e-9;   // local error control of the embedded pair
    double abs_tol = 1e-12;
    double max_step = 1e-3;
    double init_step = 1e-4;
    double event_tol = 1e-8; // bisection tolerance locating s_c
    int max_steps = 2000000;
};

// trailing-stop floor a(s) on [s_c, b*(y_c)], integrated backward from the
// terminal condition a(b*(y_c)) = a*(y_c); sell when X falls to a(X_bar)
struct TrailingCurve {
    CubicHermite a_of_s; // knots ascending in s
    double s_c = 0.0;
    double s_star = 0.0; // = b*(y_c)
    double a_end = 0.0;  // = a*(y_c)
    double min_denominator = 0.0; // smallest ODE denominator seen (positivity check)

    double operator()(double s) const { return a_of_s(s); }
    double slope(double s) const { return a_of_s.deriv(s); }
};

// right-hand side of the curve ODE at (s, a); exposed for tests
double trailing_rhs(const ThresholdEngine& eng, double s, double a);

TrailingCurve integrate_trailing(const ThresholdEngine& eng, TrailingControls ctl = {});

} // namespace omega
