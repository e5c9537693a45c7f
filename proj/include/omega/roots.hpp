#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "omega/errors.hpp"

namespace omega {

// Brent-Dekker on a sign-changing bracket [a,b].
template <class F>
double brent(F&& f, double a, double b, double xtol = 1e-12, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw numeric_error("brent: no sign change on bracket");
    if (std::fabs(fa) < std::fabs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0) return b;
        if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
            d = e = m; // bisect
        } else {
            double p, q_, s = fb / fa;
            if (a == c) { // secant
                p = 2.0 * m * s;
                q_ = 1.0 - s;
            } else { // inverse quadratic
                const double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q_ = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q_ = -q_; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q_ - std::fabs(tol * q_), std::fabs(e * q_))) {
                e = d; d = p / q_;
            } else {
                d = e = m;
            }
        }
        a = b; fa = fb;
        b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = e = b - a; }
    }
    throw numeric_error("brent: too many iterations");
}

// infimum of {x in [lo,hi] : pred(x)}; pred must be monotone (false then true)
template <class P>
double bisect_pred(P&& pred, double lo, double hi, double xtol = 1e-12, int max_iter = 200) {
    if (pred(lo)) return lo;
    if (!pred(hi)) throw numeric_error("bisect_pred: predicate false on whole bracket");
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        const double m = 0.5 * (lo + hi);
        (pred(m) ? hi : lo) = m;
    }
    return hi;
}

// golden-section minimum of f on [a,b]; returns argmin (endpoints allowed)
template <class F>
double golden_min(F&& f, double a, double b, double xtol = 1e-10, int max_iter = 200) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && b - a > xtol; ++it) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// grid scan then golden refinement inside the best cell; returns argmin
template <class F>
double grid_golden_min(F&& f, double a, double b, int n_grid, double xtol = 1e-10) {
    if (!(b > a)) return a;
    double best_x = a, best_f = f(a);
    for (int i = 1; i <= n_grid; ++i) {
        const double x = a + (b - a) * i / n_grid;
        const double fx = f(x);
        if (fx < best_f) { best_f = fx; best_x = x; }
    }
    const double h = (b - a) / n_grid;
    const double lo = std::max(a, best_x - h), hi = std::min(b, best_x + h);
    const double xg = golden_min(f, lo, hi, xtol);
    return (f(xg) < best_f) ? xg : best_x;
}

} // namespace omega
