#include "omega/trailing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "omega/errors.hpp"
#include "omega/roots.hpp"

namespace omega {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695,
                 E4 = B4 - 393.0 / 640, E5 = B5 + 92097.0 / 339200,
                 E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

struct RhsCache {
    const ThresholdEngine& eng;
    double* min_den;
    std::map<std::pair<std::int64_t, std::int64_t>, double> memo;

    double operator()(double s, double a) {
        const auto key = std::make_pair(std::llround(s * 1e12), std::llround(a * 1e12));
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const double v = eval(s, a);
        memo.emplace(key, v);
        return v;
    }

    double eval(double s, double a) const {
        const auto& p = eng.prefs();
        const double rho = p.rho, one_rho = 1.0 - rho;
        const double y = s - p.c;
        // trial stages of a rejected step may poke slightly outside the strip
        // b_low <= a < y where the equation lives; evaluate at the clamp
        const double ac = std::clamp(a, eng.b_low(), y - 1e-12);

        const double den_factor = (p.r + p.q - psi(eng.model(), one_rho)) *
                                      std::exp(one_rho * ac) -
                                  (p.r + p.q) - one_rho * eng.f_jump(ac);
        if (den_factor < 1e-12)
            throw numeric_error("trailing: ODE denominator vanished (should be "
                                "bounded away from zero)");
        if (den_factor < *min_den) *min_den = den_factor;

        const double kernel = eng.two_rate().value(s, ac, y);
        const double num = p.q * eng.w_r().value(p.c) * one_rho *
                           (eng.v_floor(y) + eng.delta(y, ac, y));
        return num / (kernel * den_factor);
    }
};

} // namespace

double trailing_rhs(const ThresholdEngine& eng, double s, double a) {
    double min_den = std::numeric_limits<double>::infinity();
    RhsCache rhs{eng, &min_den, {}};
    return rhs.eval(s, a);
}

TrailingCurve integrate_trailing(const ThresholdEngine& eng, TrailingControls ctl) {
    if (eng.kind() != RegimeKind::SevereLowTolerance)
        throw validation_error("trailing curve exists only under severe anxiety "
                               "with low drawdown tolerance");
    const double yc = eng.y_c();
    const auto ab = eng.a_b_star(yc);
    const double b_low = eng.b_low();
    const double s_floor = b_low + eng.prefs().c; // s_c lies strictly above this

    TrailingCurve out;
    out.s_star = ab.b;
    out.a_end = ab.a;
    out.min_denominator = std::numeric_limits<double>::infinity();

    RhsCache rhs{eng, &out.min_denominator, {}};

    std::vector<double> ss, as, ds; // accumulated backward (s decreasing)
    double s = ab.b, a = ab.a;
    double k1 = rhs(s, a);
    ss.push_back(s);
    as.push_back(a);
    ds.push_back(k1);

    double h = -std::min(ctl.init_step, ctl.max_step); // backward in s
    bool done = false;
    for (int step = 0; step < ctl.max_steps && !done; ++step) {
        if (s + h < s_floor) h = s_floor - s;
        if (-h < 1e-14)
            throw numeric_error("trailing: reached s = b_low + c without the "
                                "floor hitting b_low");

        const double k2 = rhs(s + h / 5, a + h * A21 * k1);
        const double k3 = rhs(s + 3 * h / 10, a + h * (A31 * k1 + A32 * k2));
        const double k4 = rhs(s + 4 * h / 5, a + h * (A41 * k1 + A42 * k2 + A43 * k3));
        const double k5 =
            rhs(s + 8 * h / 9, a + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        const double k6 =
            rhs(s + h, a + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        const double a_new =
            a + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        const double k7 = rhs(s + h, a_new); // FSAL
        const double err = std::fabs(
            h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7));
        const double tol = ctl.abs_tol + ctl.rel_tol * std::max(std::fabs(a), std::fabs(a_new));

        if (err <= tol) {
            const double s_new = s + h;
            if (a_new <= b_low) {
                // crossed the floor: locate s_c on the local Hermite segment
                const double s0 = s, a0 = a, d0 = k1, d1 = k7, hs = s_new - s0;
                auto seg = [&](double sq) {
                    const double t = (sq - s0) / hs, t2 = t * t, t3 = t2 * t;
                    return (2 * t3 - 3 * t2 + 1) * a0 + (t3 - 2 * t2 + t) * hs * d0 +
                           (-2 * t3 + 3 * t2) * a_new + (t3 - t2) * hs * d1 - b_low;
                };
                out.s_c = brent(seg, s_new, s0, ctl.event_tol);
                ss.push_back(out.s_c);
                as.push_back(b_low);
                ds.push_back(rhs(out.s_c, b_low));
                done = true;
            } else {
                s = s_new;
                a = a_new;
                k1 = k7;
                ss.push_back(s);
                as.push_back(a);
                ds.push_back(k1);
            }
        }
        double scale = 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
        h *= std::clamp(scale, 0.2, 5.0);
        if (-h > ctl.max_step) h = -ctl.max_step;
    }
    if (!done) throw numeric_error("trailing: step budget exhausted before reaching b_low");

    std::reverse(ss.begin(), ss.end());
    std::reverse(as.begin(), as.end());
    std::reverse(ds.begin(), ds.end());
    out.a_of_s = CubicHermite{std::move(ss), std::move(as), std::move(ds)};
    return out;
}

} // namespace omega
