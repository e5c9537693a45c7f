#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "omega/interp.hpp"
#include "omega/levy_model.hpp"
#include "omega/regime.hpp"
#include "omega/scale_functions.hpp"

namespace omega {

enum class RegimeKind { Mild, SevereHighTolerance, SevereLowTolerance };

struct SolveControls {
    double x_max = 50.0;      // search window for the minimum of g
    int ubar_grid = 2000;
    int sup_grid = 400;       // inner sup scan for y_tilde
    double sup_scan_below = 10.0; // scan starts at b_low - this
    int ab_grid = 200;        // x-scan for the (a*, b*) dip
    double root_tol = 1e-10;
    double a_bisect_tol = 1e-9;
    double newton_tol = 1e-9;
    int curve_points = 320;   // sampling of the a*/b* curves
};

struct ThresholdSet {
    RegimeKind kind = RegimeKind::Mild;
    double h_star = 0.0;
    double b_low = 0.0;
    double z_c = 0.0;
    double u_bar = 0.0;
    double y_bar = 0.0;
    double y_tilde = 0.0, y_hat = 0.0, c_tilde = 0.0; // severe only (else NaN)
    double y_c = 0.0;
    double a_star_yc = 0.0, b_star_yc = 0.0;          // severe-low only (else NaN)
    std::map<std::string, double> residuals;

    // translate log-price thresholds by log K (differences stay put)
    ThresholdSet shifted(double log_k) const;
};

// All solver state for one unit-scale problem (K = 1). Thread-safe for
// const use once warmed up; lazy members are mutex-guarded.
class ThresholdEngine {
public:
    ThresholdEngine(const LevyModel& m, const Preferences& p, SolveControls ctl = {});

    const LevyModel& model() const { return model_; }
    const Preferences& prefs() const { return prefs_; }
    const SolveControls& controls() const { return ctl_; }
    const ScaleFn& w_r() const { return two_rate_.w_r(); }
    const ScaleFn& w_rq() const { return two_rate_.w_rq(); }
    const OccupationKernel& kernel() const { return kernel_; }
    const TwoRateKernel& two_rate() const { return two_rate_; }
    const RegimeReport& regime() const { return regime_; }
    double phi_r() const { return kernel_.phi_r(); }
    double phi_rq() const { return kernel_.phi_rq(); }

    RegimeKind kind() const;

    double b_low() const { return b_low_; }
    double z_c() const { return z_c_; }

    // largest z with g(z - y) = e^{-(1-rho) y}/(1-rho); selling level of the
    // fixed-level clock problem
    double z_star(double y) const;

    // (L - r) applied to the floor value above b_low; decreasing, root y_hat
    double chi(double x) const;
    double chi_quad(double x) const;   // quadrature cross-check
    double f_jump(double x) const;     // jump integral shared by chi and the ODE
    double f_jump_quad(double x) const;

    double y_hat() const;
    double y_tilde() const;  // severe only
    double c_tilde() const;  // severe only

    double v_floor(double x) const;    // stop-now value floor (unit K)
    double delta(double x, double a, double y) const;
    double delta_dx(double x, double a, double y) const;

    struct AB { double a = 0.0, b = 0.0; };
    AB a_b_star(double y) const; // exact solve, memoized per y

    double y_c() const;          // solves m(y) = c
    double m_of_y(double y) const;

    // monotone samplers on [y_tilde, y_hat]; built lazily by a warm sweep
    double a_star(double y) const;
    double b_star(double y) const;
    const CubicHermite& a_star_curve() const;
    const CubicHermite& b_star_curve() const;
    double curve_end() const; // last y covered by the sweep

    ThresholdSet solve() const;

private:
    double sup_ratio(double y, double* argmax) const; // sup_x U/I at clock level y
    double h_gap(double y) const;                     // sup ratio minus boundary ratio
    AB solve_ab(double y, const AB* warm) const;
    void build_curves() const;

    LevyModel model_;
    Preferences prefs_;
    SolveControls ctl_;
    TwoRateKernel two_rate_;
    OccupationKernel kernel_;
    RegimeReport regime_;
    double b_low_ = 0.0, z_c_ = 0.0;
    double psi_one_rho_ = 0.0;
    std::vector<double> chi_jump_coeff_; // per jump term, factor on e^{-eta(x - b_low)}

    mutable std::mutex mu_;
    mutable std::optional<double> y_hat_, y_tilde_, c_tilde_, z_tilde_, y_c_;
    mutable std::map<double, AB> ab_memo_;
    mutable std::optional<CubicHermite> a_curve_, b_curve_;
    mutable double curve_end_ = 0.0;
    mutable std::map<std::string, double> residuals_;
};

} // namespace omega
