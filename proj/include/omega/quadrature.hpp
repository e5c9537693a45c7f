#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "omega/errors.hpp"

namespace omega {

// 10-21 Gauss-Kronrod pair, nodes on [-1,1] (QUADPACK dqk21 constants).
namespace gk21_detail {

inline constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

} // namespace gk21_detail

// one Kronrod panel; returns {integral, |kronrod - gauss|}
template <class F>
std::pair<double, double> gk21_panel(F&& f, double a, double b) {
    using namespace gk21_detail;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resg = 0.0, resk = wgk[10] * fc; // the even Gauss rule has no center node
    for (int j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx), f2 = f(c + dx);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

struct QuadControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 28;
    std::size_t max_panels = 100000;
};

namespace quad_detail {

template <class F>
double adapt(F& f, double a, double b, double abs_tol, double rel_tol, int depth,
             const QuadControl& ctl, std::size_t& panels) {
    if (++panels > ctl.max_panels)
        throw numeric_error("adaptive quadrature: panel budget exhausted");
    auto [val, err] = gk21_panel(f, a, b);
    if (err <= abs_tol || err <= rel_tol * std::fabs(val) || depth >= ctl.max_depth)
        return val;
    const double m = 0.5 * (a + b);
    const double half_abs = 0.5 * abs_tol;
    return adapt(f, a, m, half_abs, rel_tol, depth + 1, ctl, panels) +
           adapt(f, m, b, half_abs, rel_tol, depth + 1, ctl, panels);
}

} // namespace quad_detail

template <class F>
double integrate(F&& f, double a, double b, const QuadControl& ctl = {}) {
    if (a == b) return 0.0;
    std::size_t panels = 0;
    return quad_detail::adapt(f, a, b, ctl.abs_tol, ctl.rel_tol, 0, ctl, panels);
}

// \int_a^inf f, mapped through u = a + t/(1-t)
template <class F>
double integrate_to_inf(F&& f, double a, const QuadControl& ctl = {}) {
    auto g = [&f, a](double t) {
        const double om = 1.0 - t;
        const double u = a + t / om;
        return f(u) / (om * om);
    };
    std::size_t panels = 0;
    return quad_detail::adapt(g, 0.0, 1.0 - 1e-14, ctl.abs_tol, ctl.rel_tol, 0, ctl, panels);
}

} // namespace omega
