// Release acceptance gate. Prints one [PASS]/[FAIL] line per criterion (plus
// detail lines) and exits nonzero if anything fails. Reporting criteria drive
// the installed CLI end to end; numeric criteria use the library directly.
//
// Expected threshold digits come from two sources: four-digit reference rows
// where those are consistent with the defining equations, and 30-digit
// re-derivations (closed-form kernel integrals, cross-checked by Monte Carlo
// strategy comparison) for the four entries where the four-digit rows
// contradict the equations they are supposed to solve. See kVariants.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "omega/config.hpp"
#include "omega/regime.hpp"
#include "omega/simulate.hpp"
#include "omega/thresholds.hpp"
#include "omega/value_function.hpp"

using json = nlohmann::json;
using namespace omega;

namespace {

int g_failures = 0;

std::string fmt(const char* f, ...) {
    char buf[768];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Criterion {
    std::string label;
    std::string title;
    bool ok = true;
    std::vector<std::string> lines;

    Criterion(const std::string& lab, const std::string& t) : label(lab), title(t) {
        std::printf("[ .. ] %s: %s\n", label.c_str(), title.c_str());
        std::fflush(stdout);
    }
    void check(bool cond, const std::string& what) {
        ok = ok && cond;
        lines.push_back(fmt("    %-3s %s", cond ? "ok" : "BAD", what.c_str()));
    }
    void near(double got, double want, double tol, const std::string& name) {
        check(std::isfinite(got) && std::abs(got - want) <= tol,
              fmt("%s = %.10g, expected %.10g (tol %.0e, gap %+.2e)", name.c_str(), got,
                  want, tol, got - want));
    }
    void info(const std::string& what) { lines.push_back("        " + what); }
    void finish() {
        std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", label.c_str(), title.c_str());
        for (const auto& l : lines) std::printf("%s\n", l.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

struct CliResult {
    int status = -1;
    double seconds = 0.0;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(OMEGA_CLI_PATH) + " " + args + " 2>&1";
    CliResult r;
    const auto t0 = std::chrono::steady_clock::now();
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = ::pclose(pipe);
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
    return r;
}

std::string cfg_path(const char* name) {
    return std::string(OMEGA_CONFIG_DIR) + "/" + name;
}

double jget(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number())
        return std::numeric_limits<double>::quiet_NaN();
    return j.at(key).get<double>();
}

// ---------------------------------------------------------------- criterion 1

void criterion1() {
    Criterion c("criterion 1", "mild-regime thresholds from the CLI");
    const auto r = run_cli("thresholds --config " + cfg_path("mild.cfg"));
    c.check(r.status == 0, fmt("exit status %d", r.status));
    if (r.status == 0) {
        const json j = json::parse(r.out, nullptr, false);
        c.check(j.is_object(), "output parses as JSON");
        c.check(j.value("regime", "") == "mild", "regime reported as mild");
        c.near(jget(j, "h_star"), 0.0603, 1e-3, "h_star");
        c.near(jget(j, "b_low"), 4.1903, 1e-3, "b_low");
        c.near(jget(j, "z_c"), 4.2616, 1e-3, "z_c");
    }
    c.check(r.seconds < 1.0, fmt("wall time %.2fs < 1s", r.seconds));
    c.finish();
}

// ---------------------------------------------------------------- criterion 2

void criterion2() {
    Criterion c("criterion 2", "severe-regime (wide allowance) thresholds from the CLI");
    const auto r = run_cli("thresholds --config " + cfg_path("severe_high.cfg"));
    c.check(r.status == 0, fmt("exit status %d", r.status));
    if (r.status == 0) {
        const json j = json::parse(r.out, nullptr, false);
        c.check(j.value("regime", "") == "severe_high_tolerance",
                "regime reported as severe_high_tolerance");
        c.near(jget(j, "h_star"), -31.9618, 1e-2, "h_star");
        c.near(jget(j, "b_low"), 2.5375, 1e-3, "b_low");
        c.near(jget(j, "c_tilde"), 1.5143, 5e-3, "c_tilde");
        c.near(jget(j, "y_tilde"), 2.7452, 5e-3, "y_tilde");
        c.near(jget(j, "y_hat"), 4.0946, 5e-3, "y_hat");
        c.near(jget(j, "z_c"), 4.2664, 1e-3, "z_c");
    }
    c.check(r.seconds < 30.0, fmt("wall time %.2fs < 30s", r.seconds));
    c.finish();
}

// ---------------------------------------------------------------- criterion 3

void criterion3() {
    Criterion c("criterion 3",
                "severe-regime (tight allowance) trailing thresholds from the CLI");
    const auto r = run_cli("thresholds --config " + cfg_path("severe_low.cfg"));
    c.check(r.status == 0, fmt("exit status %d", r.status));
    if (r.status == 0) {
        const json j = json::parse(r.out, nullptr, false);
        c.check(j.value("regime", "") == "severe_low_tolerance",
                "regime reported as severe_low_tolerance");
        c.near(jget(j, "s_c"), 3.0877, 5e-3, "s_c");
        c.near(jget(j, "b_star_yc"), 4.1748, 5e-3, "b_star_yc");
    }
    c.check(r.seconds < 120.0, fmt("wall time %.2fs < 2min", r.seconds));
    c.finish();
}

// ---------------------------------------------------------------- criterion 4

struct VariantRef {
    const char* name;
    double b_low, b_star, s_c, col4;  // four-digit reference row
    double b_star_fix, s_c_fix;       // 0 = row consistent; else re-derived value
};

// Four entries of the four-digit reference rows fail the equations that define
// them. The clearest case is 06_smaller_eta, whose take-profit entry 0.8555
// equals that row's y_hat exactly even though the take-profit level must stay
// strictly above y_hat; the other three disagree with 30-digit re-derivations
// of the same smooth-fit system (closed-form kernel integrals; the re-derived
// levels also win a direct Monte Carlo strategy comparison at the affected
// parameters). Those four entries are pinned to the re-derived values at
// 1e-6; all other entries must match the reference rows within 5e-3.
const VariantRef kVariants[] = {
    {"01_benchmark", 0.2277, 1.2793, 0.7331, 1.5593, 0.0, 0.0},
    {"02_smaller_rho", 0.2349, 1.8713, 0.7851, 2.1489, 0.0, 0.0},
    {"03_larger_rho", 0.2211, 1.0160, 0.6966, 1.3012, 1.0266664688, 0.0},
    {"04_smaller_sigma", 0.1792, 1.1204, 0.6950, 1.4358, 1.1254684811, 0.0},
    {"05_larger_sigma", 0.2987, 1.5807, 0.7964, 1.8416, 0.0, 0.0},
    {"06_smaller_eta", 0.2221, 0.8555, 0.6788, 1.2123, 0.936198725023, 0.689274570225},
    {"07_larger_eta", 0.2341, 1.6568, 0.7838, 1.9333, 0.0, 0.0},
};

void criterion4() {
    Criterion c("criterion 4", "threshold table across seven parameter variations");
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "omega_acceptance_compstats";
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);

    const auto r = run_cli("compstats --config " + cfg_path("variants") + " --out " +
                           dir.string());
    c.check(r.status == 0, fmt("exit status %d", r.status));
    if (r.status != 0) {
        c.finish();
        return;
    }
    const json j = json::parse(r.out, nullptr, false);
    std::map<std::string, json> rows;
    if (j.is_object() && j.contains("rows"))
        for (const auto& row : j.at("rows")) rows[row.value("config", "?")] = row;
    c.check(rows.size() == 7, fmt("7 rows reported (got %zu)", rows.size()));

    for (const auto& v : kVariants) {
        const auto it = rows.find(v.name);
        if (it == rows.end()) {
            c.check(false, fmt("%s: row missing", v.name));
            continue;
        }
        const json& row = it->second;
        c.check(row.value("status", "") == "ok", fmt("%s: status ok", v.name));
        c.near(jget(row, "b_low"), v.b_low, 5e-3, fmt("%s b_low", v.name));
        c.near(jget(row, "y_hat_plus_c"), v.col4, 5e-3, fmt("%s y_hat+c", v.name));
        if (v.b_star_fix > 0.0) {
            c.near(jget(row, "b_star_yc"), v.b_star_fix, 1e-6,
                   fmt("%s b_star_yc (re-derived)", v.name));
            c.info(fmt("%s b_star_yc: four-digit row lists %.4f, off by %+.2e", v.name,
                       v.b_star, jget(row, "b_star_yc") - v.b_star));
        } else {
            c.near(jget(row, "b_star_yc"), v.b_star, 5e-3, fmt("%s b_star_yc", v.name));
        }
        if (v.s_c_fix > 0.0) {
            c.near(jget(row, "s_c"), v.s_c_fix, 1e-6, fmt("%s s_c (re-derived)", v.name));
            c.info(fmt("%s s_c: four-digit row lists %.4f, off by %+.2e", v.name, v.s_c,
                       jget(row, "s_c") - v.s_c));
        } else {
            c.near(jget(row, "s_c"), v.s_c, 5e-3, fmt("%s s_c", v.name));
        }
    }
    fs::remove_all(dir, ec);
    c.finish();
}

// ---------------------------------------------------------------- criterion 5

void criterion5() {
    Criterion c("criterion 5",
                "Monte Carlo execution of the sell rule matches the analytic value");
    struct State {
        const char* config;
        double x, s;
    };
    // two states per regime structure: diagonal plus each distinctive band
    const State states[] = {
        {"mild.cfg", 4.0, 4.0},        {"severe_high.cfg", 4.0, 4.3},
        {"severe_high.cfg", 3.0, 4.8}, {"severe_low.cfg", 2.0, 2.0},
        {"severe_low.cfg", 3.5, 3.6},  {"severe_low.cfg", 2.3, 4.6},
    };
    std::map<std::string, std::unique_ptr<ValueSurface>> surfaces;
    for (const auto& st : states)
        if (!surfaces.count(st.config)) {
            const auto rc = parse_config_file(cfg_path(st.config));
            surfaces[st.config] = std::make_unique<ValueSurface>(rc.model, rc.prefs);
        }

    int i = 0;
    for (const auto& st : states) {
        const ValueSurface& surf = *surfaces.at(st.config);
        const double v = surf.value(st.x, st.s);
        SimConfig sc;
        sc.dt = 1e-3;
        sc.n_paths = 200000;
        sc.seed = 7001 + i;
        const auto res = estimate_value(surf, st.x, st.s, sc);
        const double z = (res.estimate - v) / std::max(res.std_error, 1e-300);
        c.check(std::abs(z) <= 3.0,
                fmt("%s (x=%.1f, s=%.1f): V=%.6f, mc=%.6f, se=%.1e, z=%+.2f", st.config,
                    st.x, st.s, v, res.estimate, res.std_error, z));

        // a fixed take-profit rule at z_c can be optimal at best
        sc.seed = 8001 + i;
        const auto tp = estimate_take_profit(surf, surf.thresholds().z_c, st.x, st.s, sc);
        const double gap = tp.estimate - v;
        c.check(gap <= 3.0 * tp.std_error + 1e-12,
                fmt("  take-profit at z_c: mc=%.6f (V%+.1e, se=%.1e)", tp.estimate, gap,
                    tp.std_error));
        ++i;
    }
    c.finish();
}

// ---------------------------------------------------------------- criterion 6

void criterion6() {
    Criterion c("criterion 6", "first-passage transforms vs simulation at 1e6 paths");
    const LevyModel m{0.18, 0.2, {{{0.25, 4.0}}}};
    const double dt = 1e-3;
    const std::int64_t n = 1000000;
    {
        const ScaleFn w(m, 0.18);
        const double truth = w.value(1.0) / w.value(2.0);
        const auto mc = mc_upcross_discount(m, 0.18, 0.0, 1.0, 2.0, dt, n, 101);
        const double z = (mc.mean - truth) / mc.se;
        c.check(std::abs(z) <= 3.0,
                fmt("two-sided exit discount: truth=%.6f, mc=%.6f, se=%.1e, z=%+.2f",
                    truth, mc.mean, mc.se, z));
    }
    {
        const TwoRateKernel k(m, 0.18, 1.0);
        const double truth = k.value(1.0, 0.0, 0.8) / k.value(2.0, 0.0, 0.8);
        const auto mc = mc_upcross_clock(m, 0.18, 1.0, 0.8, 0.0, 1.0, 2.0, dt, n, 102);
        const double z = (mc.mean - truth) / mc.se;
        c.check(std::abs(z) <= 3.0,
                fmt("two-rate exit discount:  truth=%.6f, mc=%.6f, se=%.1e, z=%+.2f",
                    truth, mc.mean, mc.se, z));
    }
    {
        const TwoRateKernel k(m, 0.18, 1.0);
        const OccupationKernel occ(k.w_r(), k.w_rq().phi_root());
        const double truth = occ.I(0.2) / occ.I(1.0);
        const auto mc = mc_clock_discount(m, 0.18, 1.0, 1.0, 1.2, 2.0, dt, n, 103);
        const double z = (mc.mean - truth) / mc.se;
        c.check(std::abs(z) <= 3.0,
                fmt("occupation-clock discount: truth=%.6f, mc=%.6f, se=%.1e, z=%+.2f",
                    truth, mc.mean, mc.se, z));
    }
    c.finish();
}

// ---------------------------------------------------------------- criterion 7

struct RegimeFixture {
    const char* name;
    Preferences prefs;
    double xmin, smin, smax;  // sampling window for surface scans
};

void criterion7() {
    Criterion c("criterion 7", "structural properties of the solution");
    const LevyModel m{0.18, 0.2, {{{0.25, 4.0}}}};
    const RegimeFixture fixtures[] = {
        {"mild", {0.18, 0.003, 0.3568, 0.0, 1.0}, 0.5, 1.0, 3.0},
        {"severe-high", {0.18, 1.0, 1.8, 0.0, 1.0}, -0.5, 0.5, 4.2},
        {"severe-low", {0.18, 1.0, 0.3568, 0.25, 1.0}, -0.5, 0.2, 2.2},
    };

    // (a) kernel log-derivative: limits and monotonicity
    {
        const ThresholdEngine eng(m, fixtures[2].prefs);
        const OccupationKernel& occ = eng.kernel();
        // lambda reaches phi_rq with finite slope -2/sigma^2, so probe close in
        c.check(std::abs(occ.lambda(1e-12) - eng.phi_rq()) <= 1e-9 * eng.phi_rq(),
                fmt("lambda(0+) = phi_rq = %.6f", eng.phi_rq()));
        c.check(std::abs(occ.lambda(40.0) - eng.phi_r()) <= 1e-6,
                fmt("lambda(inf) = phi_r = %.6f", eng.phi_r()));
        bool dec = true;
        double prev = occ.lambda(0.01);
        for (int i = 1; i <= 80; ++i) {
            const double cur = occ.lambda(0.01 + (5.0 - 0.01) * i / 80.0);
            dec = dec && cur < prev;
            prev = cur;
        }
        c.check(dec, "lambda strictly decreasing on (0, 5]");
    }

    // (b) smooth fit at the take-profit level z*(y) of the frozen problem
    for (int fi : {0, 1}) {
        const ThresholdEngine eng(m, fixtures[fi].prefs);
        const double rho = fixtures[fi].prefs.rho;
        double worst = 0.0;
        for (double y : {0.2, 0.6, 1.0}) {
            const double z = eng.z_star(y);
            const double resid = crra_of_log(z, rho) * eng.kernel().I_dx(z - y) /
                                     eng.kernel().I(z - y) -
                                 crra_of_log_dx(z, rho);
            worst = std::max(worst, std::abs(resid));
        }
        c.check(worst <= 1e-6,
                fmt("%s: smooth fit at z*(y), worst residual %.1e", fixtures[fi].name,
                    worst));
    }

    // (c)-(e) band system: smooth fit at b*, continuous fit at a*, zero gap on
    // the diagonal of the stopped balance
    {
        const ThresholdEngine eng(m, fixtures[2].prefs);
        const double yt = eng.y_tilde(), yh = eng.y_hat();
        double worst_b = 0.0, worst_a = 0.0;
        for (double t : {0.25, 0.5, 0.75}) {
            const double y = yt + t * (yh - yt);
            const auto ab = eng.a_b_star(y);
            worst_b = std::max(worst_b, std::abs(eng.delta_dx(ab.b, ab.a, y)));
            const double d = 1e-7;
            worst_a = std::max(worst_a, std::abs(v_bar(eng, ab.a + d, y) -
                                                 v_bar(eng, ab.a - d, y)));
        }
        c.check(worst_b <= 1e-6, fmt("smooth fit at b*(y), worst |d delta/dx| %.1e", worst_b));
        c.check(worst_a <= 1e-6, fmt("continuous fit at a*(y), worst value gap %.1e", worst_a));

        std::mt19937_64 gen(2024);
        std::uniform_real_distribution<double> uy(yt + 0.01, yh - 0.01);
        double worst_diag = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double y = uy(gen);
            std::uniform_real_distribution<double> ua(eng.b_low() + 0.01, y);
            const double a = ua(gen);
            worst_diag = std::max(worst_diag, std::abs(eng.delta(a, a, y)));
        }
        c.check(worst_diag <= 1e-10,
                fmt("delta(a, a; y) = 0 at 20 random points, worst %.1e", worst_diag));
    }

    // (f)-(h) surface scans per regime: sandwich bounds, seam continuity,
    // reflecting condition on the diagonal
    for (const auto& fx : fixtures) {
        const ValueSurface surf(m, fx.prefs);
        const ThresholdEngine& eng = surf.engine();
        const auto& ts = surf.thresholds_unit();
        const double cc = fx.prefs.c;

        bool sandwich = true;
        double worst_lo = 0.0, worst_hi = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double s = fx.smin + (fx.smax - fx.smin) * i / 99.0;
            for (int k = 0; k < 100; ++k) {
                const double x = fx.xmin + (s - fx.xmin) * k / 99.0;
                const double v = surf.value_unit(x, s);
                const double lo = v_lower(eng, x), hi = v_bar(eng, x, s - cc);
                worst_lo = std::max(worst_lo, lo - v);
                worst_hi = std::max(worst_hi, v - hi);
                sandwich = sandwich && lo - v <= 1e-9 && v - hi <= 1e-9;
            }
        }
        c.check(sandwich, fmt("%s: v_lower <= V <= v_bar on a 100x100 grid "
                              "(worst slacks %.1e / %.1e)",
                              fx.name, worst_lo, worst_hi));

        std::vector<double> seams;
        if (surf.kind() == RegimeKind::Mild) seams = {ts.z_c};
        else if (surf.kind() == RegimeKind::SevereHighTolerance)
            seams = {ts.z_c, ts.y_tilde + cc, ts.y_hat + cc};
        else
            seams = {surf.trailing_unit()->s_c, surf.trailing_unit()->s_star,
                     ts.y_hat + cc};
        double worst_seam = 0.0;
        for (const double seam : seams)
            for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const double x = fx.xmin + t * (seam - 1e-6 - fx.xmin);
                worst_seam = std::max(worst_seam,
                                      std::abs(surf.value_unit(x, seam + 1e-6) -
                                               surf.value_unit(x, seam - 1e-6)));
            }
        c.check(worst_seam <= 1e-4,
                fmt("%s: V continuous across %zu s-seams, worst jump %.1e", fx.name,
                    seams.size(), worst_seam));

        std::vector<double> diag;
        if (surf.kind() == RegimeKind::Mild) diag = {1.2, 1.6, 1.9};
        else if (surf.kind() == RegimeKind::SevereHighTolerance) diag = {0.8, 1.4, 1.9};
        else
            diag = {0.3, 0.55, 0.75, 0.78, 0.82};  // below s_c and inside the band
        const double h = 1e-5;
        double worst_nm = 0.0;
        for (const double s : diag)
            worst_nm = std::max(
                worst_nm, std::abs(surf.value_unit(s, s + h) - surf.value_unit(s, s)) / h);
        c.check(worst_nm <= 1e-4,
                fmt("%s: dV/ds = 0 on the diagonal, worst slope %.1e", fx.name, worst_nm));
    }

    // (i) comparative monotonicity in the preference parameters
    {
        const Preferences base = fixtures[2].prefs;
        Preferences wide = base, heavy = base;
        wide.c = 0.5;
        heavy.q = 1.5;
        const ValueSurface s0(m, base), s1(m, wide), s2(m, heavy);
        std::mt19937_64 gen(77);
        std::uniform_real_distribution<double> us(0.3, 2.0), ut(0.0, 1.0);
        bool mono_c = true, mono_q = true;
        for (int i = 0; i < 50; ++i) {
            const double s = us(gen);
            const double x = -0.5 + ut(gen) * (s + 0.5);
            const double v = s0.value_unit(x, s);
            mono_c = mono_c && s1.value_unit(x, s) >= v - 1e-9;
            mono_q = mono_q && s2.value_unit(x, s) <= v + 1e-9;
        }
        c.check(mono_c, "wider drawdown allowance never lowers V (50 random states)");
        c.check(mono_q, "heavier clock penalty never raises V (50 random states)");
    }

    // (j) risk aversion pushes both sale levels of the floor problem down
    {
        double prev_b = 0.0, prev_z = 0.0;
        bool mono_b = true, mono_z = true;
        for (double rho : {0.0, 0.25, 0.5}) {
            const ThresholdEngine eng(m, {0.18, 1.0, 0.3568, rho, 1.0});
            if (rho > 0.0) {
                mono_b = mono_b && eng.b_low() < prev_b;
                mono_z = mono_z && eng.z_c() < prev_z;
            }
            prev_b = eng.b_low();
            prev_z = eng.z_c();
        }
        c.check(mono_b, "b_low decreasing in rho over {0, 0.25, 0.5}");
        c.check(mono_z, "z_c decreasing in rho over {0, 0.25, 0.5}");
    }

    c.finish();
}

// ---------------------------------------------------------------- supplement

void supplement() {
    Criterion c("supplement", "sample-path mechanism of the trailing phase");
    const auto rc = parse_config_file(cfg_path("severe_low.cfg"));
    const ValueSurface surf(rc.model, rc.prefs);
    const double s_c = surf.trailing_unit()->s_c + surf.log_k();

    SimConfig sc;
    sc.dt = 1e-3;
    int n_trail = 0, n_take = 0, n_other = 0;
    bool arm_ok = true, stop_ok = true;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        sc.seed = seed;
        const auto rep = replay_path(surf, 2.0, 2.0, sc);
        bool armed_seen = false;
        for (std::size_t i = 0; i < rep.trace.size(); ++i) {
            const bool armed = std::isfinite(rep.trailing[i]);
            armed_seen = armed_seen || armed;
            if (armed && rep.trace[i].xbar < s_c - 1e-9) arm_ok = false;
            if (!armed && rep.trace[i].xbar > s_c + 1e-9) arm_ok = false;
            if (!armed && armed_seen) arm_ok = false;  // never disarms
        }
        if (!rep.stop.stopped) stop_ok = false;
        if (rep.stop.type == Action::SellTrailingStop) ++n_trail;
        else if (rep.stop.type == Action::SellTakeProfit) ++n_take;
        else ++n_other;
    }
    c.check(arm_ok, "trailing floor armed exactly while the running max is >= s_c");
    c.check(stop_ok && n_other == 0, "every replayed path ends in a sale");
    c.check(n_trail > 0 && n_take > 0,
            fmt("both exit types occur over 40 seeds (trailing %d, take-profit %d)",
                n_trail, n_take));

    const auto lab = surf.classify(4.2, 4.2);
    c.check(lab.action == Action::SellTakeProfit,
            "diagonal state above b*(y_c) sells immediately");
    SimConfig tiny;
    tiny.dt = 1e-3;
    tiny.n_paths = 8;
    tiny.seed = 5;
    const auto res = estimate_value(surf, 4.2, 4.2, tiny);
    c.check(res.std_error == 0.0 && std::abs(res.estimate - surf.value(4.2, 4.2)) < 1e-12,
            "immediate sale pays the exact amount (zero variance)");
    c.finish();
}

}  // namespace

int main() {
    std::printf("acceptance gate: CLI at %s\n", OMEGA_CLI_PATH);
    std::printf("                 configs at %s\n\n", OMEGA_CONFIG_DIR);
    const auto t0 = std::chrono::steady_clock::now();

    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    supplement();

    const double mins =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
        60.0;
    if (g_failures == 0) {
        std::printf("\nACCEPTANCE PASSED (%.1f min)\n", mins);
        return 0;
    }
    std::printf("\nACCEPTANCE FAILED: %d block(s) (%.1f min)\n", g_failures, mins);
    return 1;
}
