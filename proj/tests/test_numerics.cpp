#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "omega/interp.hpp"
#include "omega/quadrature.hpp"
#include "omega/rng.hpp"
#include "omega/roots.hpp"
#include "support/oracles.hpp"

using namespace omega;

TEST_CASE("adaptive quadrature on smooth integrands") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return x * x * x; }, -1.0, 3.0) ==
          doctest::Approx(20.0).epsilon(1e-12));
    // oscillatory, against the independent Simpson oracle
    auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    CHECK(integrate(f, 0.0, 5.0) ==
          doctest::Approx(oracle::simpson(f, 0.0, 5.0, 20000)).epsilon(1e-9));
    CHECK(integrate(f, 2.0, 2.0) == 0.0);
}

TEST_CASE("quadrature splits a near-singular peak") {
    auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
    const double exact = 2.0 * std::atan(1.0 / 1e-2) / 1e-2;
    CHECK(integrate(f, -1.0, 1.0) == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("semi-infinite quadrature") {
    CHECK(integrate_to_inf([](double x) { return std::exp(-x); }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_to_inf([](double x) { return x * std::exp(-0.5 * x * x); }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // shifted start
    CHECK(integrate_to_inf([](double x) { return std::exp(-4.0 * x); }, 2.0) ==
          doctest::Approx(std::exp(-8.0) / 4.0).epsilon(1e-9));
}

TEST_CASE("brent finds simple roots") {
    CHECK(brent([](double x) { return std::cos(x); }, 0.0, 2.0) ==
          doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(brent([](double x) { return x * x * x - 2.0; }, 0.0, 2.0) ==
          doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(brent([](double x) { return 1.0 + x * x; }, -1.0, 1.0),
                    numeric_error);
}

TEST_CASE("bisect_pred locates a predicate edge") {
    const double edge = 0.637;
    const double got = bisect_pred([&](double x) { return x >= edge; }, 0.0, 1.0, 1e-10);
    CHECK(got == doctest::Approx(edge).epsilon(1e-8));
    CHECK_THROWS_AS(bisect_pred([](double) { return false; }, 0.0, 1.0), numeric_error);
}

TEST_CASE("grid_golden_min finds an interior dip") {
    auto f = [](double x) { return (x - 1.7) * (x - 1.7) + 0.01 * std::sin(3.0 * x); };
    const double mx = grid_golden_min(f, 0.0, 3.0, 120, 1e-10);
    // true minimum of the perturbed parabola, located by oracle bisection on f'
    const double xr = oracle::bisect(
        [&](double x) { return 2.0 * (x - 1.7) + 0.03 * std::cos(3.0 * x); }, 1.6, 1.8);
    CHECK(mx == doctest::Approx(xr).epsilon(1e-7));
    CHECK(f(mx) <= f(xr) + 1e-12);
}

TEST_CASE("pchip interpolates knots and preserves monotonicity") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 10; ++i) {
        xs.push_back(0.3 * i);
        ys.push_back(std::atan(0.3 * i));  // increasing, concave
    }
    const auto ch = make_pchip(xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(ch(xs[i]) == doctest::Approx(ys[i]).epsilon(1e-14));
    double prev = ch(0.0);
    for (double x = 0.01; x <= 3.0; x += 0.01) {
        const double v = ch(x);
        CHECK(v >= prev - 1e-12);  // no overshoot wiggles
        prev = v;
    }
    // derivative consistent with finite differences of the evaluator
    for (double x : {0.17, 1.44, 2.9})
        CHECK(ch.deriv(x) ==
              doctest::Approx(oracle::fd_deriv([&](double t) { return ch(t); }, x))
                  .epsilon(1e-5));
}

TEST_CASE("pchip reproduces linear data exactly") {
    const auto ch = make_pchip({0.0, 0.5, 2.0, 3.0}, {1.0, 2.0, 5.0, 7.0});
    for (double x = 0.0; x <= 3.0; x += 0.1)
        CHECK(ch(x) == doctest::Approx(1.0 + 2.0 * x).epsilon(1e-13));
}

TEST_CASE("path rng streams are deterministic and distinct") {
    PathRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool same_c = true, same_d = true;
    for (int i = 0; i < 64; ++i) {
        const double ua = a.uniform();
        CHECK(ua == b.uniform());
        CHECK(ua > 0.0);
        CHECK(ua < 1.0);
        same_c = same_c && ua == c.uniform();
        same_d = same_d && ua == d.uniform();
    }
    CHECK_FALSE(same_c);
    CHECK_FALSE(same_d);
}

TEST_CASE("rng moments") {
    PathRng g(123, 0);
    const int n = 200000;
    double su = 0, suu = 0, sn = 0, snn = 0, sn3 = 0, se = 0;
    for (int i = 0; i < n; ++i) {
        const double u = g.uniform(), z = g.normal(), e = g.exponential(2.5);
        su += u; suu += u * u;
        sn += z; snn += z * z; sn3 += z * z * z;
        se += e;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(4e-3));
    CHECK(suu / n == doctest::Approx(1.0 / 3.0).epsilon(6e-3));
    CHECK(sn / n == doctest::Approx(0.0).scale(1.0).epsilon(8e-3));
    CHECK(snn / n == doctest::Approx(1.0).epsilon(8e-3));
    CHECK(sn3 / n == doctest::Approx(0.0).scale(1.0).epsilon(4e-2));
    CHECK(se / n == doctest::Approx(0.4).epsilon(1e-2));
}
