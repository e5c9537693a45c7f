#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "omega/config.hpp"
#include "omega/errors.hpp"
#include "omega/regime.hpp"
#include "omega/simulate.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

const char* kind_str(omega::RegimeKind k) {
    switch (k) {
    case omega::RegimeKind::Mild: return "mild";
    case omega::RegimeKind::SevereHighTolerance: return "severe_high_tolerance";
    default: return "severe_low_tolerance";
    }
}

json config_echo(const omega::RunConfig& rc) {
    json j = json::object();
    for (const auto& [k, v] : rc.raw) j[k] = v;
    return j;
}

void put_finite(json& j, const char* key, double v) {
    if (std::isfinite(v)) j[key] = v;
}

void require_valid(const omega::RunConfig& rc) {
    const auto rep = omega::validate(rc.model, rc.prefs);
    if (!rep.ok()) {
        std::string msg = "invalid configuration:";
        for (const auto& v : rep.violations) msg += "\n  - " + v;
        throw omega::validation_error(msg);
    }
}

void require_state(const omega::RunConfig& rc) {
    if (!std::isfinite(rc.x0) || !std::isfinite(rc.s0))
        throw omega::validation_error("sim.x0 and sim.s0 are required for this command");
    if (rc.x0 > rc.s0)
        throw omega::validation_error("sim.x0 must not exceed sim.s0");
}

std::ofstream open_artifact(const std::string& out_dir, const std::string& name,
                            std::string* path_out) {
    fs::path p = fs::path(out_dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw omega::validation_error("cannot write artifact: " + p.string());
    *path_out = p.string();
    return f;
}

json threshold_json(const omega::ValueSurface& surf) {
    const auto ts = surf.thresholds();
    json j;
    j["regime"] = kind_str(ts.kind);
    j["h_star"] = ts.h_star;
    j["b_low"] = ts.b_low;
    j["z_c"] = ts.z_c;
    put_finite(j, "u_bar", ts.u_bar);
    put_finite(j, "y_bar", ts.y_bar);
    put_finite(j, "y_tilde", ts.y_tilde);
    put_finite(j, "y_hat", ts.y_hat);
    put_finite(j, "c_tilde", ts.c_tilde);
    put_finite(j, "y_c", ts.y_c);
    put_finite(j, "a_star_yc", ts.a_star_yc);
    put_finite(j, "b_star_yc", ts.b_star_yc);
    if (std::isfinite(ts.y_hat)) j["y_hat_plus_c"] = ts.y_hat + surf.prefs().c;
    if (surf.trailing_unit())
        j["s_c"] = surf.trailing_unit()->s_c + surf.log_k();
    if (!ts.residuals.empty()) {
        json res = json::object();
        for (const auto& [k, v] : ts.residuals) res[k] = v;
        j["residuals"] = res;
    }
    return j;
}

int cmd_classify(const omega::RunConfig& rc) {
    require_valid(rc);
    const auto rep = omega::classify(rc.model, rc.prefs);
    json j;
    j["command"] = "classify";
    j["config"] = config_echo(rc);
    j["h_star"] = rep.h_star;
    j["regime"] = rep.severe ? "severe" : "mild";
    put_finite(j, "u_bar", rep.u_bar);
    // y_bar is a log-price level; report it on the configured price scale
    put_finite(j, "y_bar", rep.y_bar + std::log(rc.prefs.K));
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_thresholds(const omega::RunConfig& rc) {
    require_valid(rc);
    omega::ValueSurface surf(rc.model, rc.prefs);
    json j = threshold_json(surf);
    j["command"] = "thresholds";
    j["config"] = config_echo(rc);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_value(const omega::RunConfig& rc) {
    require_valid(rc);
    require_state(rc);
    omega::ValueSurface surf(rc.model, rc.prefs);
    const double v = surf.value(rc.x0, rc.s0);
    const auto lab = surf.classify(rc.x0, rc.s0);
    json j;
    j["command"] = "value";
    j["config"] = config_echo(rc);
    j["x"] = rc.x0;
    j["s"] = rc.s0;
    j["value"] = v;
    j["action"] = omega::action_name(lab.action);
    j["region"] = omega::region_name(lab.active_region);
    j["regime"] = kind_str(lab.regime);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_region(const omega::RunConfig& rc, const std::string& out_dir) {
    require_valid(rc);
    if (rc.grid_n < 2) throw omega::validation_error("region: need grid.n or --grid >= 2");
    if (!(std::isfinite(rc.xmin) && std::isfinite(rc.xmax) && std::isfinite(rc.smin) &&
          std::isfinite(rc.smax)))
        throw omega::validation_error("region: need a window (grid.* or --window)");
    omega::ValueSurface surf(rc.model, rc.prefs);
    const auto grid = surf.region_grid(rc.xmin, rc.xmax, rc.smin, rc.smax, rc.grid_n);
    std::string path;
    auto f = open_artifact(out_dir, "region.csv", &path);
    f << "x,s,value,label\n";
    for (const auto& g : grid)
        f << fmt17(g.x) << ',' << fmt17(g.s) << ',' << fmt17(g.value) << ','
          << omega::region_name(g.label.active_region) << ':'
          << omega::action_name(g.label.action) << "\n";
    json j;
    j["command"] = "region";
    j["config"] = config_echo(rc);
    j["artifact"] = path;
    j["rows"] = grid.size();
    std::cout << j.dump(2) << "\n";
    return 0;
}

json sim_json(const omega::SimResult& e) {
    json j;
    j["estimate"] = e.estimate;
    j["std_error"] = e.std_error;
    j["n_paths"] = e.n_paths;
    j["n_stopped"] = e.n_stopped;
    j["mean_stop_time"] = e.mean_stop_time;
    j["n_take_profit"] = e.n_take_profit;
    j["n_stop_loss"] = e.n_stop_loss;
    j["n_trailing"] = e.n_trailing;
    j["tail_bias_bound"] = e.tail_bias_bound;
    if (!e.warning.empty()) j["warning"] = e.warning;
    return j;
}

int cmd_simulate(const omega::RunConfig& rc) {
    require_valid(rc);
    require_state(rc);
    omega::ValueSurface surf(rc.model, rc.prefs);
    omega::SimConfig cfg;
    cfg.dt = rc.dt;
    cfg.horizon = rc.horizon;
    cfg.n_paths = rc.paths;
    cfg.seed = rc.seed;
    cfg.antithetic = rc.antithetic;
    cfg.n_threads = rc.threads;
    cfg.substeps = rc.substeps;
    const auto e = omega::estimate_value(surf, rc.x0, rc.s0, cfg);
    json j = sim_json(e);
    j["command"] = "simulate";
    j["config"] = config_echo(rc);
    j["x"] = rc.x0;
    j["s"] = rc.s0;
    const double v = surf.value(rc.x0, rc.s0);
    j["analytic_value"] = v;
    if (e.std_error > 0.0) j["z_score"] = (e.estimate - v) / e.std_error;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_replay(const omega::RunConfig& rc, const std::string& out_dir) {
    require_valid(rc);
    require_state(rc);
    omega::ValueSurface surf(rc.model, rc.prefs);
    omega::SimConfig cfg;
    cfg.dt = rc.dt;
    cfg.horizon = rc.horizon;
    cfg.seed = rc.seed;
    cfg.substeps = rc.substeps;
    const auto rep = omega::replay_path(surf, rc.x0, rc.s0, cfg);
    std::string path;
    auto f = open_artifact(out_dir, "trace.csv", &path);
    f << "t,x,xbar,clock,trailing\n";
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
        const auto& p = rep.trace[i];
        f << fmt17(p.t) << ',' << fmt17(p.x) << ',' << fmt17(p.xbar) << ','
          << fmt17(p.clock) << ',';
        if (std::isfinite(rep.trailing[i])) f << fmt17(rep.trailing[i]);
        f << "\n";
    }
    json j;
    j["command"] = "replay";
    j["config"] = config_echo(rc);
    j["artifact"] = path;
    j["stopped"] = rep.stop.stopped;
    if (rep.stop.stopped) {
        j["stop_time"] = rep.stop.time;
        j["stop_type"] = omega::action_name(rep.stop.type);
        j["stop_level"] = rep.stop.level;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_compstats(const std::string& cfg_dir, const std::string& out_dir) {
    if (!fs::is_directory(cfg_dir))
        throw omega::validation_error("compstats: --config must be a directory of .cfg files");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg_dir))
        if (e.is_regular_file() && e.path().extension() == ".cfg")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw omega::validation_error("compstats: no .cfg files in " + cfg_dir);

    std::string path;
    auto f = open_artifact(out_dir, "compstats.csv", &path);
    f << "config,b_low,b_star_yc,s_c,y_hat_plus_c,status\n";
    json rows = json::array();
    for (const auto& file : files) {
        const std::string name = file.stem().string();
        json row;
        row["config"] = name;
        std::string status = "ok";
        double b_low = NAN, b_st = NAN, s_c = NAN, col4 = NAN;
        try {
            const auto rc = omega::parse_config_file(file.string());
            require_valid(rc);
            omega::ValueSurface surf(rc.model, rc.prefs);
            const auto ts = surf.thresholds();
            b_low = ts.b_low;
            if (ts.kind != omega::RegimeKind::SevereLowTolerance)
                status = std::string("regime mismatch: ") + kind_str(ts.kind);
            else {
                b_st = ts.b_star_yc;
                s_c = surf.trailing_unit()->s_c + surf.log_k();
                col4 = ts.y_hat + surf.prefs().c;
            }
        } catch (const std::exception& ex) {
            status = std::string("error: ") + ex.what();
            for (auto& ch : status)
                if (ch == '\n' || ch == ',') ch = ';';
        }
        f << name << ',';
        f << (std::isfinite(b_low) ? fmt17(b_low) : "") << ',';
        f << (std::isfinite(b_st) ? fmt17(b_st) : "") << ',';
        f << (std::isfinite(s_c) ? fmt17(s_c) : "") << ',';
        f << (std::isfinite(col4) ? fmt17(col4) : "") << ',';
        f << status << "\n";
        row["status"] = status;
        put_finite(row, "b_low", b_low);
        put_finite(row, "b_star_yc", b_st);
        put_finite(row, "s_c", s_c);
        put_finite(row, "y_hat_plus_c", col4);
        rows.push_back(row);
    }
    json j;
    j["command"] = "compstats";
    j["artifact"] = path;
    j["rows"] = rows;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal asset-sale thresholds and values under drawdown-"
                 "accelerated discounting"};
    app.require_subcommand(1);
    app.fallthrough(); // accept global flags after the subcommand too

    std::string config_path, out_dir = ".", window;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int grid_n = 0;
    std::int64_t paths = 0;
    double dt = 0.0;

    app.add_option("--config", config_path, "configuration file (directory for compstats)")
        ->required();
    app.add_option("--out", out_dir, "output directory for CSV artifacts");
    app.add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; },
           "RNG seed override");
    app.add_option("--grid", grid_n, "grid points per axis");
    app.add_option("--window", window, "xmin,xmax,smin,smax");
    app.add_option("--paths", paths, "Monte Carlo path count override");
    app.add_option("--dt", dt, "Monte Carlo time step override");

    auto* c_classify = app.add_subcommand("classify", "regime diagnosis");
    auto* c_thresholds = app.add_subcommand("thresholds", "optimal boundary levels");
    auto* c_region = app.add_subcommand("region", "action map over a state window");
    auto* c_value = app.add_subcommand("value", "value at one state");
    auto* c_simulate = app.add_subcommand("simulate", "Monte Carlo strategy check");
    auto* c_replay = app.add_subcommand("replay", "one traced strategy path");
    auto* c_compstats = app.add_subcommand("compstats", "threshold table over a config set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_compstats->parsed()) return cmd_compstats(config_path, out_dir);

        omega::RunConfig rc = omega::parse_config_file(config_path);
        if (seed_set) rc.seed = seed;
        if (grid_n > 0) rc.grid_n = grid_n;
        if (paths > 0) rc.paths = paths;
        if (dt > 0.0) rc.dt = dt;
        if (!window.empty()) {
            double a, b, c, d;
            if (std::sscanf(window.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
                throw omega::validation_error("--window expects xmin,xmax,smin,smax");
            rc.xmin = a;
            rc.xmax = b;
            rc.smin = c;
            rc.smax = d;
        }

        if (c_classify->parsed()) return cmd_classify(rc);
        if (c_thresholds->parsed()) return cmd_thresholds(rc);
        if (c_region->parsed()) return cmd_region(rc, out_dir);
        if (c_value->parsed()) return cmd_value(rc);
        if (c_simulate->parsed()) return cmd_simulate(rc);
        if (c_replay->parsed()) return cmd_replay(rc, out_dir);
        throw omega::validation_error("no command given");
    } catch (const omega::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const omega::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
