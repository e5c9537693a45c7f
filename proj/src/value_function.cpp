#include "omega/value_function.hpp"

#include <cmath>

#include "omega/errors.hpp"

namespace omega {

const char* action_name(Action a) {
    switch (a) {
    case Action::Hold: return "hold";
    case Action::SellTakeProfit: return "sell_take_profit";
    case Action::SellStopLoss: return "sell_stop_loss";
    case Action::SellTrailingStop: return "sell_trailing_stop";
    }
    return "?";
}

const char* region_name(Region r) {
    switch (r) {
    case Region::Continuation: return "continuation";
    case Region::S1: return "S1";
    case Region::S2: return "S2";
    case Region::S3: return "S3";
    }
    return "?";
}

double v_lower(const ThresholdEngine& eng, double x) { return eng.v_floor(x); }

double v_bar(const ThresholdEngine& eng, double x, double y) {
    const double rho = eng.prefs().rho;
    if (!eng.regime().severe || y <= eng.y_tilde()) {
        const double zs = eng.z_star(y);
        if (x >= zs) return crra_of_log(x, rho);
        return crra_of_log(zs, rho) * eng.kernel().I(x - y) / eng.kernel().I(zs - y);
    }
    if (y >= eng.y_hat()) return eng.v_floor(x);
    const auto ab = eng.a_b_star(y);
    double v = eng.v_floor(x);
    if (x > ab.a && x < ab.b) v += eng.delta(x, ab.a, y);
    return v;
}

namespace {

Preferences unit_prefs(const Preferences& p) {
    Preferences u = p;
    u.K = 1.0;
    return u;
}

std::string join_violations(const ValidationReport& rep) {
    std::string s = "invalid configuration:";
    for (const auto& v : rep.violations) s += " " + v + ";";
    return s;
}

} // namespace

ValueSurface::ValueSurface(const LevyModel& m, const Preferences& p, SolveControls sctl,
                           TrailingControls tctl)
    : model_(m), prefs_(p), log_k_(std::log(p.K)),
      eng_(m, unit_prefs(p), sctl) {
    auto rep = validate(m, p);
    if (!rep.ok()) throw validation_error(join_violations(rep));
    ts_ = eng_.solve();
    if (ts_.kind == RegimeKind::SevereLowTolerance) {
        trail_ = integrate_trailing(eng_, tctl);
        const double sc = trail_->s_c;
        v_diag_sc_ = eng_.v_floor(sc) + eng_.delta(sc, eng_.b_low(), sc - prefs_.c);
    }
}

double ValueSurface::value(double x, double s) const {
    return prefs_.K * value_unit(x - log_k_, s - log_k_);
}

StateLabel ValueSurface::classify(double x, double s) const {
    return classify_unit(x - log_k_, s - log_k_);
}

double ValueSurface::value_unit(double x, double s) const {
    if (x > s + 1e-12) throw validation_error("value: requires x <= s");
    x = std::min(x, s);
    const double c = prefs_.c, rho = prefs_.rho;
    const auto& kern = eng_.kernel();

    // value on the diagonal strip below the entry level s_top, discounted by
    // the clock held at drawdown depth c
    auto diag_branch = [&](double s_top, double v_top) {
        return std::exp(-kern.lambda(c) * (s_top - s)) * kern.I(x - s + c) / kern.I(c) *
               v_top;
    };
    auto take_profit_branch = [&](double y) {
        const double zs = eng_.z_star(y);
        if (x >= zs) return crra_of_log(x, rho);
        return crra_of_log(zs, rho) * kern.I(x - y) / kern.I(zs - y);
    };
    auto band_branch = [&](double y) {
        const auto ab = eng_.a_b_star(y);
        double v = eng_.v_floor(x);
        if (x > ab.a && x < ab.b) v += eng_.delta(x, ab.a, y);
        return v;
    };

    switch (ts_.kind) {
    case RegimeKind::Mild:
        if (s < ts_.z_c) return diag_branch(ts_.z_c, crra_of_log(ts_.z_c, rho));
        return take_profit_branch(s - c);
    case RegimeKind::SevereHighTolerance:
        if (s < ts_.z_c) return diag_branch(ts_.z_c, crra_of_log(ts_.z_c, rho));
        if (s < ts_.y_tilde + c) return take_profit_branch(s - c);
        if (s < ts_.y_hat + c) return band_branch(s - c);
        return eng_.v_floor(x);
    case RegimeKind::SevereLowTolerance: {
        const double sc = trail_->s_c, bstar = trail_->s_star;
        if (s < sc) return diag_branch(sc, v_diag_sc_);
        if (s < bstar) {
            const double a = (*trail_)(s);
            double v = eng_.v_floor(x);
            if (x >= a) v += eng_.delta(x, a, s - c);
            return v;
        }
        if (s < ts_.y_hat + c) return band_branch(s - c);
        return eng_.v_floor(x);
    }
    }
    throw numeric_error("value: unreachable regime");
}

StateLabel ValueSurface::classify_unit(double x, double s) const {
    if (x > s + 1e-12) throw validation_error("classify: requires x <= s");
    x = std::min(x, s);
    const double c = prefs_.c;
    StateLabel out;
    out.regime = ts_.kind;

    auto stop_loss_band = [&](double y) {
        const auto ab = eng_.a_b_star(y);
        if (x >= eng_.b_low() && x <= ab.a) {
            out.action = Action::SellStopLoss;
            out.active_region = Region::S2;
        } else if (x >= ab.b) {
            out.action = Action::SellTakeProfit;
            out.active_region = Region::S2;
        }
    };

    switch (ts_.kind) {
    case RegimeKind::Mild:
        if (s >= ts_.z_c && x >= eng_.z_star(s - c)) {
            out.action = Action::SellTakeProfit;
            out.active_region = Region::S1;
        }
        return out;
    case RegimeKind::SevereHighTolerance:
        if (s < ts_.z_c) return out;
        if (s < ts_.y_tilde + c) {
            if (x >= eng_.z_star(s - c)) {
                out.action = Action::SellTakeProfit;
                out.active_region = Region::S1;
            }
        } else if (s < ts_.y_hat + c) {
            stop_loss_band(s - c);
        } else if (x >= eng_.b_low()) {
            out.action = Action::SellTakeProfit;
            out.active_region = Region::S3;
        }
        return out;
    case RegimeKind::SevereLowTolerance:
        if (s < trail_->s_c) return out;
        if (s < trail_->s_star) {
            if (x >= eng_.b_low() && x <= (*trail_)(s)) {
                out.action = Action::SellTrailingStop;
                out.active_region = Region::S1;
            }
        } else if (s < ts_.y_hat + c) {
            stop_loss_band(s - c);
        } else if (x >= eng_.b_low()) {
            out.action = Action::SellTakeProfit;
            out.active_region = Region::S3;
        }
        return out;
    }
    throw numeric_error("classify: unreachable regime");
}

std::vector<ValueSurface::GridPoint> ValueSurface::region_grid(double xmin, double xmax,
                                                               double smin, double smax,
                                                               int n) const {
    if (n < 2) throw validation_error("region grid: need n >= 2 per axis");
    std::vector<GridPoint> out;
    for (int i = 0; i < n; ++i) {
        const double s = smin + (smax - smin) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double x = xmin + (xmax - xmin) * j / (n - 1);
            if (x > s) continue;
            out.push_back({x, s, value(x, s), classify(x, s)});
        }
    }
    return out;
}

} // namespace omega
