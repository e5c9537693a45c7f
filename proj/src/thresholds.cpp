#include "omega/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "omega/errors.hpp"
#include "omega/quadrature.hpp"
#include "omega/roots.hpp"

namespace omega {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

ThresholdSet ThresholdSet::shifted(double log_k) const {
    ThresholdSet s = *this;
    s.b_low += log_k;
    s.z_c += log_k;
    if (std::isfinite(s.y_bar)) s.y_bar += log_k;
    s.y_tilde += log_k;
    s.y_hat += log_k;
    s.y_c += log_k;
    s.a_star_yc += log_k;
    s.b_star_yc += log_k;
    return s;
}

ThresholdEngine::ThresholdEngine(const LevyModel& m, const Preferences& p, SolveControls ctl)
    : model_(m), prefs_(p), ctl_(ctl),
      two_rate_(m, p.r, p.q),
      kernel_(two_rate_.w_r(), two_rate_.w_rq().phi_root()) {
    if (p.K != 1.0)
        throw validation_error("threshold engine works on the unit-scale problem (K = 1)");
    auto rep = validate(m, p);
    if (!rep.ok()) throw validation_error("invalid configuration: " + rep.violations.front());

    regime_ = classify(kernel_, prefs_, ctl_.x_max, ctl_.ubar_grid);

    const double a = 1.0 - p.rho;
    const double phi_q = phi_rq();
    b_low_ = std::log(phi_q / (phi_q - a)) / a;
    const double lam_c = kernel_.lambda(p.c);
    z_c_ = std::log(lam_c / (lam_c - a)) / a;
    psi_one_rho_ = psi(model_, a);

    const double u_b = crra_of_log(b_low_, p.rho);
    const double e_b = std::exp(a * b_low_);
    for (const auto& t : model_.jumps.terms) {
        const double coeff = u_b * t.rate * t.decay / (phi_q + t.decay) -
                             t.rate * t.decay * e_b / (a * (a + t.decay)) +
                             t.rate / a;
        chi_jump_coeff_.push_back(coeff);
    }
}

RegimeKind ThresholdEngine::kind() const {
    if (!regime_.severe) return RegimeKind::Mild;
    return prefs_.c >= c_tilde() ? RegimeKind::SevereHighTolerance
                                 : RegimeKind::SevereLowTolerance;
}

double ThresholdEngine::v_floor(double x) const {
    if (x <= b_low_)
        return std::exp(phi_rq() * (x - b_low_)) * crra_of_log(b_low_, prefs_.rho);
    return crra_of_log(x, prefs_.rho);
}

double ThresholdEngine::f_jump(double x) const {
    if (x < b_low_ - 1e-9) throw validation_error("f_jump: x below b_low");
    double s = 0.0;
    for (std::size_t i = 0; i < chi_jump_coeff_.size(); ++i)
        s += chi_jump_coeff_[i] * std::exp(-model_.jumps.terms[i].decay * (x - b_low_));
    return s;
}

double ThresholdEngine::f_jump_quad(double x) const {
    if (x < b_low_ - 1e-9) throw validation_error("f_jump: x below b_low");
    double s = 0.0;
    for (const auto& t : model_.jumps.terms) {
        const double pref = t.rate * t.decay * std::exp(t.decay * (b_low_ - x));
        s += pref * integrate_to_inf(
                        [&](double u) {
                            const double gap =
                                v_floor(b_low_ - u) - crra_of_log(b_low_ - u, prefs_.rho);
                            return gap * std::exp(-t.decay * u);
                        },
                        0.0);
    }
    return s;
}

double ThresholdEngine::chi(double x) const {
    const double a = 1.0 - prefs_.rho;
    return prefs_.r / a - (prefs_.r - psi_one_rho_) * std::exp(a * x) / a + f_jump(x);
}

double ThresholdEngine::chi_quad(double x) const {
    const double a = 1.0 - prefs_.rho;
    return prefs_.r / a - (prefs_.r - psi_one_rho_) * std::exp(a * x) / a + f_jump_quad(x);
}

double ThresholdEngine::z_star(double y) const {
    const double a = 1.0 - prefs_.rho;
    const double level = std::exp(-a * y) / a;
    auto g = [&](double u) { return g_fn(kernel_, prefs_.rho, u); };

    double lo;
    if (regime_.severe) {
        lo = regime_.u_bar;
        if (g(lo) > level)
            throw validation_error("z_star: level above the minimum of g (y > y_bar)");
    } else {
        lo = std::min(0.0, b_low_ - y) - 1.0;
        int guard = 0;
        while (g(lo) > level) {
            lo -= 5.0;
            if (++guard > 200) throw numeric_error("z_star: no left bracket");
        }
    }
    double hi = lo + 1.0;
    int guard = 0;
    while (g(hi) <= level) {
        hi += 5.0;
        if (++guard > 200) throw numeric_error("z_star: no right bracket");
    }
    const double u = bisect_pred([&](double v) { return g(v) > level; }, lo, hi, 1e-12);
    return y + u;
}

double ThresholdEngine::y_hat() const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (y_hat_) return *y_hat_;
    }
    double root;
    if (chi(b_low_) <= 0.0) {
        root = b_low_;
    } else {
        double hi = b_low_ + 1.0;
        int guard = 0;
        while (chi(hi) > 0.0) {
            hi += 2.0;
            if (++guard > 200) throw numeric_error("y_hat: no bracket");
        }
        root = brent([&](double x) { return chi(x); }, b_low_, hi, 1e-12);
    }
    std::lock_guard<std::mutex> lock(mu_);
    y_hat_ = root;
    residuals_["chi_at_y_hat"] = chi(root);
    return root;
}

double ThresholdEngine::sup_ratio(double y, double* argmax) const {
    const double lo = b_low_ - ctl_.sup_scan_below;
    const double hi = y + regime_.u_bar;
    auto neg_ratio = [&](double x) {
        return -crra_of_log(x, prefs_.rho) / kernel_.I(x - y);
    };
    const double xm = grid_golden_min(neg_ratio, lo, hi, ctl_.sup_grid, ctl_.root_tol);
    if (argmax) *argmax = xm;
    return -neg_ratio(xm);
}

double ThresholdEngine::h_gap(double y) const {
    const double zs = z_star(y);
    const double boundary = crra_of_log(zs, prefs_.rho) / kernel_.I(zs - y);
    return sup_ratio(y, nullptr) - boundary;
}

double ThresholdEngine::y_tilde() const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (y_tilde_) return *y_tilde_;
    }
    if (!regime_.severe) throw validation_error("y_tilde exists only in the severe regime");
    const double lo = b_low_ + 1e-7;
    const double hi = regime_.y_bar - 1e-7;
    if (!(h_gap(lo) < 0.0 && h_gap(hi) > 0.0))
        throw numeric_error("y_tilde: no crossing between b_low and y_bar");
    const double yt = brent([&](double y) { return h_gap(y); }, lo, hi, ctl_.root_tol);
    const double zt = z_star(yt);
    double x0 = 0.0;
    sup_ratio(yt, &x0);
    std::lock_guard<std::mutex> lock(mu_);
    y_tilde_ = yt;
    z_tilde_ = zt;
    c_tilde_ = zt - yt;
    residuals_["balance_at_y_tilde"] = h_gap(yt);
    residuals_["argmax_minus_b_low"] = x0 - b_low_;
    return yt;
}

double ThresholdEngine::c_tilde() const {
    y_tilde();
    std::lock_guard<std::mutex> lock(mu_);
    return *c_tilde_;
}

double ThresholdEngine::delta(double x, double a, double y) const {
    if (a > y + 1e-12) throw validation_error("delta: requires a <= y");
    if (a < b_low_ - 1e-9) throw validation_error("delta: requires a >= b_low");
    a = std::min(a, y);
    if (x <= a) return 0.0;

    const double q = prefs_.q;
    auto h = [&](double w) { return q * crra_of_log(w, prefs_.rho) - chi(w); };

    double part1;
    const double upper = std::min(x, y);
    if (two_rate_.w_r().has_confluent() || two_rate_.w_rq().has_confluent()) {
        part1 = integrate([&](double w) { return two_rate_.value(x, w, y) * h(w); }, a, upper);
    } else {
        thread_local std::vector<std::complex<double>> B;
        two_rate_.coeffs(x, y, B);
        part1 = integrate([&](double w) { return two_rate_.eval_coeffs(B, w) * h(w); }, a, upper);
    }
    if (x <= y) return part1;

    const double part2 =
        integrate([&](double w) { return two_rate_.w_r().value(x - w) * chi(w); }, y, x);
    return part1 - part2;
}

double ThresholdEngine::delta_dx(double x, double a, double y) const {
    if (a > y + 1e-12) throw validation_error("delta: requires a <= y");
    a = std::min(a, y);
    if (x <= a) return 0.0;

    const double q = prefs_.q;
    auto h = [&](double w) { return q * crra_of_log(w, prefs_.rho) - chi(w); };

    if (x <= y) {
        // d/dx of int_a^x W^{(r+q)}(x-w) h(w) dw; the boundary term vanishes
        return integrate([&](double w) { return two_rate_.w_rq().deriv(x - w) * h(w); }, a, x);
    }
    double part1;
    if (two_rate_.w_r().has_confluent() || two_rate_.w_rq().has_confluent()) {
        part1 = integrate([&](double w) { return two_rate_.dx(x, w, y) * h(w); }, a, y);
    } else {
        thread_local std::vector<std::complex<double>> B;
        two_rate_.coeffs_dx(x, y, B);
        part1 = integrate([&](double w) { return two_rate_.eval_coeffs(B, w) * h(w); }, a, y);
    }
    const double part2 =
        integrate([&](double w) { return two_rate_.w_r().deriv(x - w) * chi(w); }, y, x);
    return part1 - part2;
}

namespace {

struct InnerMin {
    double x;
    double val;
};

} // namespace

ThresholdEngine::AB ThresholdEngine::solve_ab(double y, const AB* warm) const {
    const double yt = y_tilde();
    const double yh = y_hat();
    const double zt = [&] {
        std::lock_guard<std::mutex> lock(mu_);
        return *z_tilde_;
    }();

    if (y <= yt + 1e-12) return {b_low_, zt};
    if (y >= yh - 1e-12) return {yh, yh};

    auto inner_min = [&](double a, double xlo, double xhi) -> InnerMin {
        auto f = [&](double x) { return delta(x, a, y); };
        const double xm = grid_golden_min(f, xlo, xhi, ctl_.ab_grid, ctl_.root_tol);
        return {xm, f(xm)};
    };

    const double x_span_lo = y + 1e-10;
    const double x_span_hi = zt;

    auto h_at = [&](double w) { return prefs_.q * crra_of_log(w, prefs_.rho) - chi(w); };

    // 2-D Newton on (value fit, smooth fit) at (a, b); the a-partials are
    // analytic since d delta / da = -W^{(r,q)}(x, a; y) h(a)
    auto newton_refine = [&](AB g) -> std::optional<AB> {
        g.a = std::clamp(g.a, b_low_, y - 1e-9);
        g.b = std::clamp(g.b, y + 1e-9, zt);
        for (int it = 0; it < 16; ++it) {
            const double f1 = delta(g.b, g.a, y);
            const double f2 = delta_dx(g.b, g.a, y);
            const double hb = 1e-7;
            const double ha_val = h_at(g.a);
            const double f1a = -two_rate_.value(g.b, g.a, y) * ha_val;
            const double f1b = f2; // d/db of delta is the smooth-fit function
            const double f2a = -two_rate_.dx(g.b, g.a, y) * ha_val;
            const double f2b = (delta_dx(g.b + hb, g.a, y) - f2) / hb;
            const double det = f1a * f2b - f1b * f2a;
            if (!(std::fabs(det) > 1e-300) || !(f2b > 0.0)) return std::nullopt;
            double da = (-f1 * f2b + f2 * f1b) / det;
            double db = (-f2 * f1a + f1 * f2a) / det;
            const double cap = 0.1;
            const double mag = std::max(std::fabs(da), std::fabs(db));
            if (mag > cap) {
                da *= cap / mag;
                db *= cap / mag;
            }
            g.a += da;
            g.b += db;
            if (!(g.a >= b_low_ - 1e-9 && g.a <= y && g.b > y && g.b <= zt + 1e-6))
                return std::nullopt;
            if (std::fabs(da) < ctl_.newton_tol && std::fabs(db) < ctl_.newton_tol) return g;
        }
        return std::nullopt;
    };

    if (warm) {
        auto refined = newton_refine(*warm);
        if (refined) return *refined;
    }

    // cold path: bisection on a, scanning x for the dip of delta
    double a_lo = b_low_, a_hi = y - 1e-10;
    double b_at_hi = 0.0;
    auto pred = [&](double a) {
        const InnerMin m = inner_min(a, x_span_lo, x_span_hi);
        if (m.val <= 0.0) {
            b_at_hi = m.x;
            return true;
        }
        return false;
    };
    if (!pred(a_hi)) throw numeric_error("a_b_star: no touching point below y");
    if (pred(a_lo)) {
        // dip already nonpositive at b_low: y is at (or numerically at) y_tilde
        return {b_low_, b_at_hi};
    }
    for (int it = 0; it < 200 && a_hi - a_lo > ctl_.a_bisect_tol; ++it) {
        const double mid = 0.5 * (a_lo + a_hi);
        (pred(mid) ? a_hi : a_lo) = mid;
    }
    AB guess{a_hi, b_at_hi};
    auto refined = newton_refine(guess);
    return refined ? *refined : guess;
}

ThresholdEngine::AB ThresholdEngine::a_b_star(double y) const {
    AB warm{};
    bool have_warm = false;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ab_memo_.find(y);
        if (it != ab_memo_.end()) return it->second;
        if (!ab_memo_.empty()) {
            auto ub = ab_memo_.lower_bound(y);
            double best = kInf;
            for (auto cand : {ub, (ub == ab_memo_.begin() ? ab_memo_.end() : std::prev(ub))}) {
                if (cand == ab_memo_.end()) continue;
                const double d = std::fabs(cand->first - y);
                if (d < best) {
                    best = d;
                    warm = cand->second;
                }
            }
            have_warm = std::isfinite(best) && best < 0.1;
        }
    }
    const double yh = y_hat(), yt = y_tilde();
    AB out;
    if (y < yh - 1e-12 && yh - y < 1e-3 * (yh - yt)) {
        // near the pinch the dip depth of delta collapses like (y_hat - y)^2 and
        // drops below quadrature resolution, so bisection cannot bracket it; seed
        // newton from the interpolated curves and keep the curve values if it
        // fails or wanders off the nearly singular system
        AB guess{a_star_curve()(y), b_star_curve()(y)};
        try {
            out = solve_ab(y, &guess);
        } catch (const numeric_error&) {
            out = guess;
        }
        if (!(out.a <= y && out.b >= y) || std::fabs(out.a - guess.a) > 1e-3 ||
            std::fabs(out.b - guess.b) > 1e-3)
            out = guess;
    } else {
        out = solve_ab(y, have_warm ? &warm : nullptr);
    }
    std::lock_guard<std::mutex> lock(mu_);
    ab_memo_[y] = out;
    if (ab_memo_.size() > 4096) ab_memo_.erase(ab_memo_.begin());
    return out;
}

double ThresholdEngine::m_of_y(double y) const {
    if (!regime_.severe) return z_star(y) - y;
    if (y <= y_tilde()) return z_star(y) - y;
    if (y < y_hat()) return a_b_star(y).b - y;
    throw validation_error("m_of_y: undefined at or above y_hat");
}

double ThresholdEngine::y_c() const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (y_c_) return *y_c_;
    }
    const double c = prefs_.c;
    double root;
    if (kind() != RegimeKind::SevereLowTolerance) {
        root = z_c_ - c;
    } else {
        const double yt = y_tilde(), yh = y_hat();
        const double zt = yt + c_tilde();
        auto G = [&](double y) { return a_b_star(y).b - y - c; };
        double hi = std::min(zt - c, yh - 1e-3 * (yh - yt));
        int guard = 0;
        while (G(hi) >= 0.0) {
            hi = yh - 0.25 * (yh - hi);
            if (++guard > 6) throw numeric_error("y_c: tolerance too small to resolve");
        }
        root = brent(G, yt, hi, ctl_.root_tol);
    }
    std::lock_guard<std::mutex> lock(mu_);
    y_c_ = root;
    return root;
}

void ThresholdEngine::build_curves() const {
    const double yt = y_tilde(), yh = y_hat();
    const double zt = yt + c_tilde();
    const double span = yh - yt;
    const double pinch = std::max(1e-4 * span, 2e-5);

    std::vector<double> ys, as, bs;
    ys.push_back(yt);
    as.push_back(b_low_);
    bs.push_back(zt);
    const int n = ctl_.curve_points;
    AB prev{b_low_, zt};
    for (int i = 1; i <= n; ++i) {
        // cluster knots at both ends: the curves leave y_tilde steeply and
        // pinch together at y_hat
        const double u = double(i) / n;
        const double s = u * u * (3.0 - 2.0 * u);
        const double y = yt + (span - pinch) * s;
        const AB ab = solve_ab(y, &prev);
        ys.push_back(y);
        as.push_back(ab.a);
        bs.push_back(ab.b);
        prev = ab;
    }
    ys.push_back(yh);
    as.push_back(yh);
    bs.push_back(yh);

    std::lock_guard<std::mutex> lock(mu_);
    if (!a_curve_) {
        a_curve_ = make_pchip(ys, as);
        b_curve_ = make_pchip(ys, bs);
        curve_end_ = yh;
    }
}

const CubicHermite& ThresholdEngine::a_star_curve() const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (a_curve_) return *a_curve_;
    }
    build_curves();
    std::lock_guard<std::mutex> lock(mu_);
    return *a_curve_;
}

const CubicHermite& ThresholdEngine::b_star_curve() const {
    a_star_curve();
    std::lock_guard<std::mutex> lock(mu_);
    return *b_curve_;
}

double ThresholdEngine::curve_end() const {
    a_star_curve();
    std::lock_guard<std::mutex> lock(mu_);
    return curve_end_;
}

double ThresholdEngine::a_star(double y) const { return a_star_curve()(y); }
double ThresholdEngine::b_star(double y) const { return b_star_curve()(y); }

ThresholdSet ThresholdEngine::solve() const {
    ThresholdSet t;
    t.kind = kind();
    t.h_star = regime_.h_star;
    t.b_low = b_low_;
    t.z_c = z_c_;
    t.u_bar = regime_.u_bar;
    t.y_bar = regime_.y_bar;
    if (regime_.severe) {
        t.y_tilde = y_tilde();
        t.y_hat = y_hat();
        t.c_tilde = c_tilde();
    } else {
        t.y_tilde = t.y_hat = t.c_tilde = kNaN;
    }
    t.y_c = y_c();
    if (t.kind == RegimeKind::SevereLowTolerance) {
        const AB ab = a_b_star(t.y_c);
        t.a_star_yc = ab.a;
        t.b_star_yc = ab.b;
        std::lock_guard<std::mutex> lock(mu_);
        residuals_["take_profit_gap_at_y_c"] = ab.b - t.y_c - prefs_.c;
        residuals_["value_fit_at_y_c"] = delta(ab.b, ab.a, t.y_c);
        residuals_["smooth_fit_at_y_c"] = delta_dx(ab.b, ab.a, t.y_c);
    } else {
        t.a_star_yc = t.b_star_yc = kNaN;
    }
    std::lock_guard<std::mutex> lock(mu_);
    t.residuals = residuals_;
    return t;
}

} // namespace omega
