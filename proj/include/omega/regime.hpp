#pragma once

#include "omega/levy_model.hpp"
#include "omega/scale_functions.hpp"

namespace omega {

// Mild anxiety: the optimal sale boundary collapses to a single take-profit
// level. Severe: a band/trailing structure appears.
struct RegimeReport {
    double h_star = 0.0;
    bool severe = false;
    double u_bar = 0.0;  // largest local minimum of g; -inf when mild
    double y_bar = 0.0;  // level with g(u_bar) = e^{-(1-rho) y_bar}/(1-rho); +inf when mild
    double g_zero_minus = 0.0; // one-sided limits of g at 0 (may differ in general)
    double g_zero_plus = 0.0;
};

double g_fn(const OccupationKernel& ok, double rho, double x);
double g_fn_dx(const OccupationKernel& ok, double rho, double x);

// (phi(r+q) - 1 + rho) * (phi(r+q) - q W(0)) - q W'(0+); >= 0 iff mild
double h_star_stat(const LevyModel& m, const Preferences& p);

RegimeReport classify(const OccupationKernel& ok, const Preferences& p,
                      double x_max = 50.0, int grid = 2000);
RegimeReport classify(const LevyModel& m, const Preferences& p);

} // namespace omega
