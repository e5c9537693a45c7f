#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omega/rng.hpp"
#include "omega/value_function.hpp"

namespace omega {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 0.0;  // <= 0 means 40/r, i.e. base discount down to e^-40
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 1;
    bool antithetic = false;
    int n_threads = 0;  // 0 = hardware concurrency; results identical either way
    // Builds each step's increment from this many finer sub-draws. The law is
    // unchanged; running (dt, 2) and (dt/2, 1) with one seed couples the two
    // discretizations through a common Brownian skeleton and jump pattern, so
    // convergence checks see the pure discretization effect instead of fresh
    // Monte Carlo noise.
    int substeps = 1;
};

struct SimResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_stopped = 0;  // sold before the horizon
    double mean_stop_time = 0.0; // over stopped paths
    std::int64_t n_take_profit = 0;
    std::int64_t n_stop_loss = 0;
    std::int64_t n_trailing = 0;
    // paths alive at the horizon collect the stop-now floor as a tail proxy;
    // the residual bias is below e^{-r*horizon} * sup v_lower over end states
    double tail_bias_bound = 0.0;
    std::string warning;  // set when the tail bound exceeds 5% of the estimate
};

struct PathPoint {
    double t, x, xbar, clock;
};

// Raw model path: exact Gaussian increments, per-step Poisson(lambda*dt) jump
// counts with sizes -Exp(decay_i) picked proportionally to rate_i, running max
// corrected by the intra-step Brownian-bridge maximum, clock accumulated by
// the left-point rule as r*dt + q*dt*1{X < Xbar - c}.
std::vector<PathPoint> simulate_path(const LevyModel& m, const Preferences& p,
                                     double x0, double s0, const SimConfig& cfg,
                                     PathRng& rng);

// terminal log prices only (distribution tests); no max or clock bookkeeping
std::vector<double> terminal_samples(const LevyModel& m, double x0, double t_end,
                                     double dt, std::int64_t n, std::uint64_t seed);

// Executes the surface's sell rule path by path and averages the collected
// discounted utilities; an independent check of the analytic surface.
SimResult estimate_value(const ValueSurface& surface, double x0, double s0,
                         const SimConfig& cfg);

// Fixed alternative strategy: sell at the first up-crossing of `level` (log
// scale, same units as x0/s0), with the clock still running. Since the surface
// value is a supremum over strategies, this can only fall below it up to MC error.
SimResult estimate_take_profit(const ValueSurface& surface, double level,
                               double x0, double s0, const SimConfig& cfg);

struct StopEvent {
    bool stopped = false;
    double time = 0.0;
    Action type = Action::Hold;
    double level = 0.0;  // log price at the sale
};

struct ReplayResult {
    std::vector<PathPoint> trace;
    std::vector<double> trailing;  // trailing floor once armed, NaN before
    StopEvent stop;
};

// single traced path under the surface's sell rule (for strategy post-mortems)
ReplayResult replay_path(const ValueSurface& surface, double x0, double s0,
                         const SimConfig& cfg);

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};

// Monte Carlo sides of the first-passage transforms used by the solver.
// Upward crossings are detected with the bridge correction, so the statistics
// converge at O(dt) rather than O(sqrt(dt)).

// E_x[ e^{-r T_b^+} 1{T_b^+ < T_a^-} ]
MeanSE mc_upcross_discount(const LevyModel& m, double r, double a, double x,
                           double b, double dt, std::int64_t n, std::uint64_t seed);

// E_x[ exp(-A_{T_b^+}) 1{T_b^+ < T_a^-} ],  A_t = r t + q * time below y
MeanSE mc_upcross_clock(const LevyModel& m, double r, double q, double y,
                        double a, double x, double b, double dt, std::int64_t n,
                        std::uint64_t seed);

// E_x[ exp(-A_{T_b^+}) ] with no lower barrier
MeanSE mc_clock_discount(const LevyModel& m, double r, double q, double y,
                         double x, double b, double dt, std::int64_t n,
                         std::uint64_t seed);

}  // namespace omega
