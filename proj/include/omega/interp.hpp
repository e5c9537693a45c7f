#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "omega/errors.hpp"

namespace omega {

// cubic Hermite spline on a strictly increasing knot vector
struct CubicHermite {
    std::vector<double> x, y, dy;

    bool empty() const { return x.empty(); }
    double x_front() const { return x.front(); }
    double x_back() const { return x.back(); }

    std::size_t segment(double xq) const {
        auto it = std::upper_bound(x.begin(), x.end(), xq);
        std::size_t i = (it == x.begin()) ? 0 : std::size_t(it - x.begin()) - 1;
        return std::min(i, x.size() - 2);
    }

    double operator()(double xq) const {
        if (x.size() < 2) throw numeric_error("hermite: need at least two knots");
        xq = std::clamp(xq, x.front(), x.back());
        const std::size_t i = segment(xq);
        const double h = x[i + 1] - x[i], t = (xq - x[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * dy[i] +
               (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * dy[i + 1];
    }

    double deriv(double xq) const {
        if (x.size() < 2) throw numeric_error("hermite: need at least two knots");
        xq = std::clamp(xq, x.front(), x.back());
        const std::size_t i = segment(xq);
        const double h = x[i + 1] - x[i], t = (xq - x[i]) / h;
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y[i] / h + (3 * t2 - 4 * t + 1) * dy[i] +
                (-6 * t2 + 6 * t) * y[i + 1] / h + (3 * t2 - 2 * t) * dy[i + 1]);
    }
};

// Fritsch-Carlson monotone slopes; keeps the interpolant shape-preserving
inline std::vector<double> pchip_slopes(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        s[i] = (y[i + 1] - y[i]) / h[i];
    }
    d[0] = s[0];
    d[n - 1] = s[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    return d;
}

inline CubicHermite make_pchip(std::vector<double> x, std::vector<double> y) {
    CubicHermite ch;
    ch.dy = pchip_slopes(x, y);
    ch.x = std::move(x);
    ch.y = std::move(y);
    return ch;
}

} // namespace omega
