#include "omega/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "omega/errors.hpp"

namespace omega {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// exact sample of the Brownian segment's running maximum given both endpoints
inline double bridge_max(double x0, double x1, double sig2dt, PathRng& rng) {
    const double dx = x1 - x0;
    const double root = std::sqrt(dx * dx - 2.0 * sig2dt * std::log(rng.uniform()));
    return 0.5 * (x0 + x1 + root);
}

// per-step compound-Poisson displacement: count ~ Poisson(rate*dt), each size
// -Exp(decay_i) with the component picked proportionally to rate_i
struct JumpSampler {
    double rate = 0.0;
    double lamdt = 0.0;
    double p_nojump = 1.0;
    std::vector<double> cum_rate;
    std::vector<double> decay;

    JumpSampler(const LevyModel& m, double dt) {
        double acc = 0.0;
        for (const auto& t : m.jumps.terms) {
            acc += t.rate;
            cum_rate.push_back(acc);
            decay.push_back(t.decay);
        }
        rate = acc;
        lamdt = rate * dt;
        p_nojump = std::exp(-lamdt);
    }

    double sample(PathRng& rng) const {
        if (rate <= 0.0) return 0.0;
        const double u = rng.uniform();
        if (u <= p_nojump) return 0.0;
        int k = 0;
        double pk = p_nojump, cdf = p_nojump;
        while (u > cdf && k < 64) {
            ++k;
            pk *= lamdt / k;
            cdf += pk;
        }
        double dx = 0.0;
        for (int j = 0; j < k; ++j) {
            const double pick = rng.uniform() * rate;
            std::size_t i = 0;
            while (i + 1 < cum_rate.size() && pick > cum_rate[i]) ++i;
            dx -= rng.exponential(decay[i]);
        }
        return dx;
    }
};

void check_config(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw validation_error("sim: dt must be positive");
    if (cfg.n_paths < 1) throw validation_error("sim: n_paths must be >= 1");
    if (cfg.horizon > 0.0 && cfg.horizon / cfg.dt > 9e15)
        throw validation_error("sim: horizon/dt does not fit in an integer");
    if (cfg.substeps < 1 || cfg.substeps > 4096)
        throw validation_error("sim: substeps must be in [1, 4096]");
}

// One stream per purpose keeps the draw layout on the fine grid identical
// between a (dt, substeps=2) run and a (dt/2, substeps=1) run: normals and
// jumps line up one-to-one, only the bridge stream differs.
struct StreamSet {
    PathRng normals, jumps, bridge;
    StreamSet(std::uint64_t seed, std::uint64_t id)
        : normals(seed, 3 * id), jumps(seed, 3 * id + 1), bridge(seed, 3 * id + 2) {}
};

// executor mode; fixed per path except for the low-regime diagonal arming
enum Mode { kDiagonal, kFrozen, kStopBand, kLowTrail, kDeepS3 };

// Everything the per-path loop needs, precomputed once per (surface, spawn).
// The sell rule at a fixed running max s is a set of constant levels, and s
// only advances while the path is in a diagonal or trailing phase, so the hot
// loop reduces to scalar compares.
struct StrategyCtx {
    RegimeKind kind{};
    int mode0 = kDiagonal;
    double x0u = 0.0, s0u = 0.0;
    double log_k = 0.0, K = 1.0, rho = 0.0;
    double c = 0.0;
    double rdt = 0.0, qdt = 0.0;
    double dt = 0.0, sig2dt = 0.0, reach = 0.0;
    double mudt_f = 0.0, sigrt_f = 0.0;  // per-substep drift and vol
    int substeps = 1;
    double horizon = 0.0;
    std::int64_t max_steps = 0;
    JumpSampler jumps;  // built on the substep grid
    double b_low = kNaN;
    double first_edge = kNaN;  // z_c (mild/high) or s_c (low): diagonal target
    double frozen_up = kNaN;   // z*(s0-c) when spawned above z_c in a hold band
    double a_st = kNaN, b_st = kNaN;  // stop band at the spawn max
    double b_star_yc = kNaN;          // upper exit of the trailing band
    const TrailingCurve* trail = nullptr;
    const ThresholdEngine* eng = nullptr;

    StrategyCtx(const LevyModel& m, double dt_) : jumps(m, dt_) {}
};

StrategyCtx make_ctx(const ValueSurface& surf, double x0, double s0,
                     const SimConfig& cfg) {
    check_config(cfg);
    if (x0 > s0 + 1e-12)
        throw validation_error("sim: start state needs x0 <= s0");
    const LevyModel& m = surf.model();
    const Preferences& p = surf.prefs();
    const double dt_f = cfg.dt / cfg.substeps;
    StrategyCtx cx(m, dt_f);
    cx.kind = surf.kind();
    cx.log_k = surf.log_k();
    cx.K = p.K;
    cx.rho = p.rho;
    cx.c = p.c;
    cx.dt = cfg.dt;
    cx.rdt = p.r * cfg.dt;
    cx.qdt = p.q * cfg.dt;
    cx.mudt_f = m.mu * dt_f;
    cx.sigrt_f = m.sigma * std::sqrt(dt_f);
    cx.substeps = cfg.substeps;
    cx.sig2dt = m.sigma * m.sigma * cfg.dt;
    cx.reach = 5.5 * m.sigma * std::sqrt(cfg.dt);  // excess beyond: prob < 1e-26
    cx.horizon = cfg.horizon > 0.0 ? cfg.horizon : 40.0 / p.r;
    cx.max_steps = (std::int64_t)std::ceil(cx.horizon / cfg.dt);
    cx.x0u = std::min(x0, s0) - cx.log_k;
    cx.s0u = s0 - cx.log_k;
    cx.eng = &surf.engine();

    const ThresholdSet& ts = surf.thresholds_unit();
    cx.b_low = ts.b_low;
    const double s = cx.s0u;
    switch (cx.kind) {
    case RegimeKind::Mild:
        if (s < ts.z_c) {
            cx.mode0 = kDiagonal;
            cx.first_edge = ts.z_c;
        } else {
            cx.mode0 = kFrozen;
            cx.frozen_up = cx.eng->z_star(s - cx.c);
        }
        break;
    case RegimeKind::SevereHighTolerance:
        if (s < ts.z_c) {
            cx.mode0 = kDiagonal;
            cx.first_edge = ts.z_c;
        } else if (s < ts.y_tilde + cx.c) {
            cx.mode0 = kFrozen;
            cx.frozen_up = cx.eng->z_star(s - cx.c);
        } else if (s < ts.y_hat + cx.c) {
            cx.mode0 = kStopBand;
            const auto ab = cx.eng->a_b_star(s - cx.c);
            cx.a_st = ab.a;
            cx.b_st = ab.b;
        } else {
            cx.mode0 = kDeepS3;
        }
        break;
    case RegimeKind::SevereLowTolerance:
        cx.trail = &*surf.trailing_unit();
        cx.b_star_yc = ts.b_star_yc;
        if (s < cx.trail->s_c) {
            cx.mode0 = kDiagonal;
            cx.first_edge = cx.trail->s_c;
        } else if (s < ts.b_star_yc) {
            cx.mode0 = kLowTrail;
        } else if (s < ts.y_hat + cx.c) {
            cx.mode0 = kStopBand;
            const auto ab = cx.eng->a_b_star(s - cx.c);
            cx.a_st = ab.a;
            cx.b_st = ab.b;
        } else {
            cx.mode0 = kDeepS3;
        }
        break;
    }
    return cx;
}

struct PathOutcome {
    double payoff = 0.0;
    double stop_time = -1.0;  // -1 when the path reached the horizon
    Action label = Action::Hold;
    double tail_floor = 0.0;  // v_lower at the horizon state, else 0
};

// One path under the surface's sell rule. rec(t, x_unit, s_unit, clock, floor)
// is invoked at t = 0 and after every completed step; a no-op recorder leaves
// the loop branch-free.
template <class Rec>
PathOutcome run_one(const StrategyCtx& cx, StreamSet& rng, bool flip, Rec&& rec) {
    double x = cx.x0u, s = cx.s0u;
    double clock = 0.0;
    int mode = cx.mode0;
    double floor_cur =
        mode == kLowTrail ? (*cx.trail)(std::min(s, cx.trail->s_star)) : kNaN;
    rec(0.0, x, s, 0.0, floor_cur);

    for (std::int64_t k = 0; k < cx.max_steps; ++k) {
        const double t_next = (double)(k + 1) * cx.dt;
        clock += cx.rdt + (x < s - cx.c ? cx.qdt : 0.0);

        auto sold = [&](double xs, Action lab) {
            PathOutcome o;
            o.payoff = std::exp(-clock) * cx.K * crra_of_log(xs, cx.rho);
            o.stop_time = t_next;
            o.label = lab;
            if (xs > s) s = xs;
            rec(t_next, xs, s, clock, mode == kLowTrail ? floor_cur : kNaN);
            return o;
        };

        double x1 = x;
        for (int i = 0; i < cx.substeps; ++i) {
            const double z = rng.normals.normal();
            x1 += cx.mudt_f + cx.sigrt_f * (flip ? -z : z);
        }
        const double m01 = x1 > x ? x1 : x;

        switch (mode) {
        case kDiagonal:
            // the running max advances here; crossing the first edge either
            // sells (mild/high) or arms the trailing stop (low)
            if (m01 > s - cx.reach) {
                const double M = bridge_max(x, x1, cx.sig2dt, rng.bridge);
                if (M >= cx.first_edge) {
                    if (cx.kind != RegimeKind::SevereLowTolerance)
                        return sold(cx.first_edge, Action::SellTakeProfit);
                    s = M;
                    mode = kLowTrail;
                    floor_cur = (*cx.trail)(std::min(s, cx.trail->s_star));
                    if (M >= cx.b_star_yc)
                        return sold(cx.b_star_yc, Action::SellTakeProfit);
                } else if (M > s) {
                    s = M;
                }
            }
            break;
        case kFrozen:
            if (m01 > cx.frozen_up - cx.reach) {
                if (bridge_max(x, x1, cx.sig2dt, rng.bridge) >= cx.frozen_up)
                    return sold(cx.frozen_up, Action::SellTakeProfit);
            }
            break;
        case kStopBand:
            if (x < cx.b_low) {
                // below the band: sell when the price climbs back to its edge
                if (m01 > cx.b_low - cx.reach &&
                    bridge_max(x, x1, cx.sig2dt, rng.bridge) >= cx.b_low)
                    return sold(cx.b_low, Action::SellStopLoss);
            } else if (m01 > cx.b_st - cx.reach &&
                       bridge_max(x, x1, cx.sig2dt, rng.bridge) >= cx.b_st) {
                return sold(cx.b_st, Action::SellTakeProfit);
            }
            break;
        case kLowTrail:
            if (x < cx.b_low) {
                if (m01 > cx.b_low - cx.reach &&
                    bridge_max(x, x1, cx.sig2dt, rng.bridge) >= cx.b_low)
                    return sold(cx.b_low, Action::SellTrailingStop);
            } else if (m01 > s - cx.reach) {
                const double M = bridge_max(x, x1, cx.sig2dt, rng.bridge);
                if (M >= cx.b_star_yc)
                    return sold(cx.b_star_yc, Action::SellTakeProfit);
                if (M > s) {
                    s = M;
                    floor_cur = (*cx.trail)(std::min(s, cx.trail->s_star));
                }
            }
            break;
        case kDeepS3:
            if (m01 > cx.b_low - cx.reach &&
                bridge_max(x, x1, cx.sig2dt, rng.bridge) >= cx.b_low)
                return sold(cx.b_low, Action::SellTakeProfit);
            break;
        }

        for (int i = 0; i < cx.substeps; ++i) x1 += cx.jumps.sample(rng.jumps);

        // end-of-step entries into the sell set (jump landings and drifts)
        if (mode == kStopBand) {
            if (x1 >= cx.b_low && x1 <= cx.a_st) {
                x = x1;
                return sold(x1, Action::SellStopLoss);
            }
        } else if (mode == kLowTrail) {
            if (x1 >= cx.b_low && x1 <= floor_cur) {
                x = x1;
                return sold(x1, Action::SellTrailingStop);
            }
        }

        x = x1;
        rec(t_next, x, s, clock, mode == kLowTrail ? floor_cur : kNaN);
    }

    PathOutcome o;
    o.tail_floor = v_lower(*cx.eng, x);
    o.payoff = std::exp(-clock) * cx.K * o.tail_floor;
    return o;
}

struct NoRec {
    void operator()(double, double, double, double, double) const {}
};

SimResult reduce_paths(const std::vector<double>& payoff,
                       const std::vector<double>& stop_time,
                       const std::vector<std::uint8_t>& label,
                       const std::vector<double>& tailv, double r,
                       double horizon) {
    const std::int64_t n = (std::int64_t)payoff.size();
    SimResult res;
    res.n_paths = n;
    double sum = 0.0, sumsq = 0.0, tsum = 0.0, tail_sup = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        sum += payoff[i];
        sumsq += payoff[i] * payoff[i];
        if (stop_time[i] >= 0.0) {
            ++res.n_stopped;
            tsum += stop_time[i];
            switch ((Action)label[i]) {
            case Action::SellTakeProfit: ++res.n_take_profit; break;
            case Action::SellStopLoss: ++res.n_stop_loss; break;
            case Action::SellTrailingStop: ++res.n_trailing; break;
            default: break;
            }
        } else {
            tail_sup = std::max(tail_sup, tailv[i]);
        }
    }
    res.estimate = sum / (double)n;
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - sum * sum / (double)n) / (double)(n - 1));
        res.std_error = std::sqrt(var / (double)n);
    }
    res.mean_stop_time = res.n_stopped ? tsum / (double)res.n_stopped : 0.0;
    res.tail_bias_bound = std::exp(-r * horizon) * tail_sup;
    if (res.tail_bias_bound > 0.05 * std::fabs(res.estimate))
        res.warning = "horizon too short: tail bias bound exceeds 5% of the estimate";
    return res;
}

// deterministic parallel map over path indices; per-path slots make the final
// sequential reduction independent of the thread count
template <class Fn>
void parallel_paths(std::int64_t n, int n_threads, Fn&& body) {
    int nt = n_threads > 0 ? n_threads : (int)std::thread::hardware_concurrency();
    if (nt < 1) nt = 1;
    nt = (int)std::min<std::int64_t>(nt, n);
    if (nt == 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

SimResult run_sold_at_spawn(const ValueSurface& surf, double x0, Action lab,
                            const SimConfig& cfg) {
    SimResult res;
    res.n_paths = cfg.n_paths;
    res.n_stopped = cfg.n_paths;
    res.estimate = surf.prefs().K * crra_of_log(x0 - surf.log_k(), surf.prefs().rho);
    switch (lab) {
    case Action::SellTakeProfit: res.n_take_profit = cfg.n_paths; break;
    case Action::SellStopLoss: res.n_stop_loss = cfg.n_paths; break;
    case Action::SellTrailingStop: res.n_trailing = cfg.n_paths; break;
    default: break;
    }
    return res;
}

}  // namespace

std::vector<PathPoint> simulate_path(const LevyModel& m, const Preferences& p,
                                     double x0, double s0, const SimConfig& cfg,
                                     PathRng& rng) {
    check_config(cfg);
    if (x0 > s0 + 1e-12)
        throw validation_error("sim: start state needs x0 <= s0");
    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 40.0 / std::max(p.r, 1e-12);
    const auto n_steps = (std::int64_t)std::ceil(horizon / cfg.dt);
    const double mudt = m.mu * cfg.dt;
    const double sigrt = m.sigma * std::sqrt(cfg.dt);
    const double sig2dt = m.sigma * m.sigma * cfg.dt;
    const double reach = 5.5 * sigrt;
    const JumpSampler jumps(m, cfg.dt);

    std::vector<PathPoint> out;
    out.reserve((std::size_t)n_steps + 1);
    double x = std::min(x0, s0), s = s0, clock = 0.0;
    out.push_back({0.0, x, s, 0.0});
    for (std::int64_t k = 0; k < n_steps; ++k) {
        clock += p.r * cfg.dt + (x < s - p.c ? p.q * cfg.dt : 0.0);
        const double z = rng.normal();
        double x1 = x + mudt + sigrt * z;
        const double m01 = x1 > x ? x1 : x;
        if (m01 > s - reach) {
            const double M = bridge_max(x, x1, sig2dt, rng);
            if (M > s) s = M;
        }
        x1 += jumps.sample(rng);
        x = x1;
        out.push_back({(double)(k + 1) * cfg.dt, x, s, clock});
    }
    return out;
}

std::vector<double> terminal_samples(const LevyModel& m, double x0, double t_end,
                                     double dt, std::int64_t n, std::uint64_t seed) {
    if (!(t_end > 0.0) || !(dt > 0.0)) throw validation_error("sim: need t_end, dt > 0");
    if (n < 1) throw validation_error("sim: n must be >= 1");
    const auto n_steps = std::max<std::int64_t>(1, (std::int64_t)std::llround(t_end / dt));
    const double dte = t_end / (double)n_steps;  // land exactly on t_end
    const double mudt = m.mu * dte;
    const double sigrt = m.sigma * std::sqrt(dte);
    const JumpSampler jumps(m, dte);
    std::vector<double> out((std::size_t)n);
    for (std::int64_t i = 0; i < n; ++i) {
        PathRng rng(seed, (std::uint64_t)i);
        double x = x0;
        for (std::int64_t k = 0; k < n_steps; ++k)
            x += mudt + sigrt * rng.normal() + jumps.sample(rng);
        out[(std::size_t)i] = x;
    }
    return out;
}

SimResult estimate_value(const ValueSurface& surface, double x0, double s0,
                         const SimConfig& cfg) {
    check_config(cfg);
    const StateLabel l0 = surface.classify(x0, s0);
    if (l0.sell()) return run_sold_at_spawn(surface, x0, l0.action, cfg);

    const StrategyCtx cx = make_ctx(surface, x0, s0, cfg);
    const auto n = cfg.n_paths;
    std::vector<double> payoff((std::size_t)n), stop_time((std::size_t)n),
        tailv((std::size_t)n);
    std::vector<std::uint8_t> label((std::size_t)n);
    parallel_paths(n, cfg.n_threads, [&](std::int64_t i) {
        StreamSet rng(cfg.seed, (std::uint64_t)(cfg.antithetic ? i >> 1 : i));
        const bool flip = cfg.antithetic && (i & 1);
        const PathOutcome o = run_one(cx, rng, flip, NoRec{});
        payoff[(std::size_t)i] = o.payoff;
        stop_time[(std::size_t)i] = o.stop_time;
        label[(std::size_t)i] = (std::uint8_t)o.label;
        tailv[(std::size_t)i] = o.tail_floor * cx.K;
    });
    return reduce_paths(payoff, stop_time, label, tailv, surface.prefs().r, cx.horizon);
}

SimResult estimate_take_profit(const ValueSurface& surface, double level,
                               double x0, double s0, const SimConfig& cfg) {
    check_config(cfg);
    if (x0 > s0 + 1e-12)
        throw validation_error("sim: start state needs x0 <= s0");
    const LevyModel& m = surface.model();
    const Preferences& p = surface.prefs();
    const double log_k = surface.log_k();
    const double lv = level - log_k;
    const double x0u = std::min(x0, s0) - log_k, s0u = s0 - log_k;

    if (x0u >= lv) {
        SimResult res;
        res.n_paths = cfg.n_paths;
        res.n_stopped = cfg.n_paths;
        res.n_take_profit = cfg.n_paths;
        res.estimate = p.K * crra_of_log(x0u, p.rho);
        return res;
    }

    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 40.0 / p.r;
    const auto max_steps = (std::int64_t)std::ceil(horizon / cfg.dt);
    const double dt_f = cfg.dt / cfg.substeps;
    const double mudt_f = m.mu * dt_f;
    const double sigrt_f = m.sigma * std::sqrt(dt_f);
    const double sig2dt = m.sigma * m.sigma * cfg.dt;
    const double reach = 5.5 * m.sigma * std::sqrt(cfg.dt);
    const double rdt = p.r * cfg.dt, qdt = p.q * cfg.dt;
    const JumpSampler jumps(m, dt_f);
    const ThresholdEngine& eng = surface.engine();
    const double sale_value = p.K * crra_of_log(lv, p.rho);

    const auto n = cfg.n_paths;
    std::vector<double> payoff((std::size_t)n), stop_time((std::size_t)n),
        tailv((std::size_t)n);
    std::vector<std::uint8_t> label((std::size_t)n);
    parallel_paths(n, cfg.n_threads, [&](std::int64_t i) {
        StreamSet rng(cfg.seed, (std::uint64_t)(cfg.antithetic ? i >> 1 : i));
        const bool flip = cfg.antithetic && (i & 1);
        double x = x0u, s = s0u, clock = 0.0;
        double pay = 0.0, st = -1.0, tf = 0.0;
        for (std::int64_t k = 0; k < max_steps; ++k) {
            clock += rdt + (x < s - p.c ? qdt : 0.0);
            double x1 = x;
            for (int j = 0; j < cfg.substeps; ++j) {
                const double z = rng.normals.normal();
                x1 += mudt_f + sigrt_f * (flip ? -z : z);
            }
            const double m01 = x1 > x ? x1 : x;
            if (m01 > std::min(s, lv) - reach) {
                const double M = bridge_max(x, x1, sig2dt, rng.bridge);
                if (M >= lv) {
                    pay = std::exp(-clock) * sale_value;
                    st = (double)(k + 1) * cfg.dt;
                    break;
                }
                if (M > s) s = M;
            }
            for (int j = 0; j < cfg.substeps; ++j) x1 += jumps.sample(rng.jumps);
            x = x1;
        }
        if (st < 0.0) {
            tf = p.K * v_lower(eng, x);
            pay = std::exp(-clock) * tf;
        }
        payoff[(std::size_t)i] = pay;
        stop_time[(std::size_t)i] = st;
        label[(std::size_t)i] = (std::uint8_t)Action::SellTakeProfit;
        tailv[(std::size_t)i] = tf;
    });
    return reduce_paths(payoff, stop_time, label, tailv, p.r, horizon);
}

ReplayResult replay_path(const ValueSurface& surface, double x0, double s0,
                         const SimConfig& cfg) {
    ReplayResult out;
    const StateLabel l0 = surface.classify(x0, s0);
    const double log_k = surface.log_k();
    if (l0.sell()) {
        out.trace.push_back({0.0, x0, s0, 0.0});
        out.trailing.push_back(kNaN);
        out.stop = {true, 0.0, l0.action, x0};
        return out;
    }
    const StrategyCtx cx = make_ctx(surface, x0, s0, cfg);
    StreamSet rng(cfg.seed, 0);
    auto rec = [&](double t, double x, double s, double clock, double fl) {
        out.trace.push_back({t, x + log_k, s + log_k, clock});
        out.trailing.push_back(std::isnan(fl) ? kNaN : fl + log_k);
    };
    const PathOutcome o = run_one(cx, rng, false, rec);
    if (o.stop_time >= 0.0) {
        out.stop.stopped = true;
        out.stop.time = o.stop_time;
        out.stop.type = o.label;
        out.stop.level = out.trace.back().x;
    }
    return out;
}

namespace {

template <bool Lower, bool Clock>
MeanSE first_passage_mc(const LevyModel& m, double r, double q, double y,
                        double a, double x0, double b, double dt, std::int64_t n,
                        std::uint64_t seed) {
    if (!(dt > 0.0) || n < 1) throw validation_error("mc: need dt > 0, n >= 1");
    if (!(x0 < b)) throw validation_error("mc: need x0 < b");
    const double mudt = m.mu * dt;
    const double sigrt = m.sigma * std::sqrt(dt);
    const double sig2dt = m.sigma * m.sigma * dt;
    const double reach = 5.5 * sigrt;
    const double rdt = r * dt, qdt = q * dt;
    const JumpSampler jumps(m, dt);
    const auto max_steps = (std::int64_t)std::ceil(80.0 / std::max(r, 1e-3) / dt);

    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        PathRng rng(seed, (std::uint64_t)i);
        double x = x0, A = 0.0, val = 0.0;
        for (std::int64_t k = 0; k < max_steps; ++k) {
            A += rdt;
            if constexpr (Clock)
                if (x < y) A += qdt;
            const double z = rng.normal();
            double x1 = x + mudt + sigrt * z;
            const double m01 = x1 > x ? x1 : x;
            if (b - m01 < reach) {
                if (bridge_max(x, x1, sig2dt, rng) >= b) {
                    val = std::exp(-(A));
                    break;
                }
            }
            if constexpr (Lower) {
                if (x1 <= a) break;
                const double g0 = x - a, g1 = x1 - a;
                if (g0 * g1 < 20.0 * sig2dt &&
                    rng.uniform() < std::exp(-2.0 * g0 * g1 / sig2dt))
                    break;
            }
            x1 += jumps.sample(rng);
            if constexpr (Lower)
                if (x1 <= a) break;
            x = x1;
        }
        sum += val;
        sumsq += val * val;
    }
    MeanSE out;
    out.mean = sum / (double)n;
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - sum * sum / (double)n) / (double)(n - 1));
        out.se = std::sqrt(var / (double)n);
    }
    return out;
}

}  // namespace

MeanSE mc_upcross_discount(const LevyModel& m, double r, double a, double x,
                           double b, double dt, std::int64_t n, std::uint64_t seed) {
    return first_passage_mc<true, false>(m, r, 0.0, 0.0, a, x, b, dt, n, seed);
}

MeanSE mc_upcross_clock(const LevyModel& m, double r, double q, double y,
                        double a, double x, double b, double dt, std::int64_t n,
                        std::uint64_t seed) {
    return first_passage_mc<true, true>(m, r, q, y, a, x, b, dt, n, seed);
}

MeanSE mc_clock_discount(const LevyModel& m, double r, double q, double y,
                         double x, double b, double dt, std::int64_t n,
                         std::uint64_t seed) {
    return first_passage_mc<false, true>(m, r, q, y, 0.0, x, b, dt, n, seed);
}

}  // namespace omega
