#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "omega/levy_model.hpp"

namespace omega {

// Flat key-value run configuration. Model and preference keys are required
// where stated; sim.* and grid.* provide command defaults that CLI flags may
// override. The raw map preserves the file's keys for echoing into reports.
//
//   model.mu, model.sigma
//   jump.<i>.rate        arrival rate of jump component i (1-based)
//   jump.<i>.intensity   exponential size intensity (mean jump = 1/intensity)
//   prefs.r, prefs.q, prefs.c, prefs.rho, prefs.K
//   sim.x0, sim.s0, sim.paths, sim.dt, sim.seed, sim.horizon,
//   sim.antithetic, sim.threads, sim.substeps
//   grid.n, grid.xmin, grid.xmax, grid.smin, grid.smax
struct RunConfig {
    LevyModel model;
    Preferences prefs;

    double x0 = std::numeric_limits<double>::quiet_NaN();
    double s0 = std::numeric_limits<double>::quiet_NaN();
    std::int64_t paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double horizon = 0.0;
    bool antithetic = false;
    int threads = 0;
    int substeps = 1;

    int grid_n = 0;
    double xmin = std::numeric_limits<double>::quiet_NaN();
    double xmax = std::numeric_limits<double>::quiet_NaN();
    double smin = std::numeric_limits<double>::quiet_NaN();
    double smax = std::numeric_limits<double>::quiet_NaN();

    std::map<std::string, std::string> raw;
};

// throws validation_error on unknown keys, bad numbers, or missing model keys
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");
RunConfig parse_config_file(const std::string& path);

}  // namespace omega
