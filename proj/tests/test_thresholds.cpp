#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "omega/quadrature.hpp"
#include "omega/thresholds.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace omega;

// the engine works on the unit price scale; the reference plots use K = 10,
// so published levels translate by log 10
constexpr double kLog10 = 2.302585092994046;

TEST_CASE("mild setting: take-profit levels") {
    const ThresholdEngine eng(fx::base_model(), fx::mild_prefs());
    CHECK(eng.kind() == RegimeKind::Mild);
    CHECK(eng.b_low() + kLog10 == doctest::Approx(4.1903).epsilon(2.5e-4));
    CHECK(eng.z_c() + kLog10 == doctest::Approx(4.2616).epsilon(2.5e-4));
    // regression pins
    CHECK(eng.b_low() == doctest::Approx(1.8877436450673641).epsilon(1e-10));
    CHECK(eng.z_c() == doctest::Approx(1.9590006359888688).epsilon(1e-10));
    // z_c is where the diagonal strategy stops improving: z*(z_c - c) = z_c
    CHECK(eng.z_star(eng.z_c() - 0.3568) == doctest::Approx(eng.z_c()).epsilon(1e-9));
    CHECK(eng.z_c() > eng.b_low());
}

TEST_CASE("severe high tolerance: band edges") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_high_prefs());
    CHECK(eng.kind() == RegimeKind::SevereHighTolerance);
    CHECK(eng.b_low() + kLog10 == doctest::Approx(2.5375).epsilon(4e-4));
    CHECK(eng.c_tilde() == doctest::Approx(1.5143).epsilon(3.3e-3));
    CHECK(eng.y_tilde() + kLog10 == doctest::Approx(2.7452).epsilon(1.8e-3));
    CHECK(eng.y_hat() + kLog10 == doctest::Approx(4.0946).epsilon(1.2e-3));
    CHECK(eng.z_c() + kLog10 == doctest::Approx(4.2664).epsilon(2.5e-4));
    CHECK(eng.y_tilde() < eng.y_hat());
    CHECK(eng.c_tilde() ==
          doctest::Approx(eng.z_star(eng.y_tilde()) - eng.y_tilde()).epsilon(1e-10));
}

TEST_CASE("chi closed form against quadrature and its root") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    for (double x : {2.6, 3.0, 3.8, 4.4})
        CHECK(eng.chi(x) == doctest::Approx(eng.chi_quad(x)).epsilon(1e-8));
    for (double x : {2.6, 3.0, 3.8})
        CHECK(eng.f_jump(x) == doctest::Approx(eng.f_jump_quad(x)).epsilon(1e-8));
    CHECK(eng.chi(eng.y_hat()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    // chi decreasing across its root
    CHECK(eng.chi(eng.y_hat() - 0.3) > 0.0);
    CHECK(eng.chi(eng.y_hat() + 0.3) < 0.0);
}

TEST_CASE("severe low tolerance: full threshold set") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    CHECK(eng.kind() == RegimeKind::SevereLowTolerance);
    const auto ts = eng.solve();
    CHECK(ts.y_c == doctest::Approx(1.515467).epsilon(1e-5));
    CHECK(ts.a_star_yc == doctest::Approx(1.513997).epsilon(1e-5));
    CHECK(ts.b_star_yc == doctest::Approx(1.872267).epsilon(1e-5));
    // y_c balances the band width against the allowance
    CHECK(ts.b_star_yc - ts.y_c == doctest::Approx(0.3568).epsilon(1e-10));
    CHECK(ts.b_star_yc == doctest::Approx(eng.m_of_y(ts.y_c) + ts.y_c).epsilon(1e-8));
}

TEST_CASE("value and smooth fit hold at the band ends") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    oracle::Lcg rng(3);
    for (int i = 0; i < 4; ++i) {
        const double y = eng.y_tilde() +
                         (eng.y_hat() - eng.y_tilde()) * (0.15 + 0.7 * rng.u());
        const auto ab = eng.a_b_star(y);
        CHECK(ab.a <= y);
        CHECK(ab.b >= eng.y_hat() - 1e-6);
        CHECK(eng.delta(ab.b, ab.a, y) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
        CHECK(eng.delta_dx(ab.b, ab.a, y) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
        // delta vanishes at its lower end and stays positive inside the band
        CHECK(eng.delta(ab.a, ab.a, y) == 0.0);
        const double mid = 0.5 * (ab.a + ab.b);
        CHECK(eng.delta(mid, ab.a, y) > 0.0);
    }
}

TEST_CASE("band endpoints pinch together at the top") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    const double yt = eng.y_tilde(), yh = eng.y_hat();
    const auto at_bottom = eng.a_b_star(yt);
    CHECK(at_bottom.a == doctest::Approx(eng.b_low()).epsilon(1e-6));
    CHECK(at_bottom.b == doctest::Approx(eng.z_star(yt)).epsilon(1e-6));
    const auto near_top = eng.a_b_star(yh - 1e-7);
    CHECK(near_top.a == doctest::Approx(yh).epsilon(1e-4));
    CHECK(near_top.b == doctest::Approx(yh).epsilon(1e-4));

    // a* increases, b* decreases in between
    double pa = at_bottom.a, pb = at_bottom.b;
    for (int i = 1; i <= 24; ++i) {
        const double y = yt + (yh - yt) * i / 25.0;
        const auto ab = eng.a_b_star(y);
        CHECK(ab.a >= pa - 1e-7);
        CHECK(ab.b <= pb + 1e-7);
        pa = ab.a;
        pb = ab.b;
    }
}

TEST_CASE("interpolated curves track the exact solves") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    const double yt = eng.y_tilde(), yh = eng.y_hat();
    for (double f : {0.12, 0.43, 0.77, 0.95}) {
        const double y = yt + (yh - yt) * f;
        const auto ab = eng.a_b_star(y);
        CHECK(eng.a_star(y) == doctest::Approx(ab.a).epsilon(1e-6));
        CHECK(eng.b_star(y) == doctest::Approx(ab.b).epsilon(1e-6));
    }
}

TEST_CASE("m is decreasing and hits the allowance at y_c") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    const double yt = eng.y_tilde(), yh = eng.y_hat();
    double prev = eng.m_of_y(yt + 1e-6);
    for (int i = 1; i <= 20; ++i) {
        const double y = yt + (yh - yt) * i / 21.0;
        const double v = eng.m_of_y(y);
        CHECK(v < prev + 1e-9);
        prev = v;
    }
    CHECK(eng.m_of_y(eng.y_c()) == doctest::Approx(0.3568).epsilon(1e-8));
}

TEST_CASE("z_star solves the boundary ratio equation") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_high_prefs());
    // g(z - y) = e^{-(1-rho) y}/(1-rho) at z = z*(y), largest root
    const TwoRateKernel k(fx::base_model(), 0.18, 1.0);
    const OccupationKernel occ(k.w_r(), k.w_rq().phi_root());
    // probes must stay below y_bar (≈ 1.072 for this model), where z* exists
    for (double y : {-0.5, 0.2, 0.6}) {
        const double z = eng.z_star(y);
        CHECK(g_fn(occ, 0.0, z - y) == doctest::Approx(std::exp(-y)).epsilon(1e-8));
        // strictly decreasing in the clock level
        CHECK(eng.z_star(y + 0.1) < z);
    }
}

TEST_CASE("comparative statics center point (rho = 0.25)") {
    const ThresholdEngine eng(fx::base_model(), fx::bench_prefs());
    CHECK(eng.kind() == RegimeKind::SevereLowTolerance);
    const auto ts = eng.solve();
    CHECK(ts.b_low == doctest::Approx(0.2277).epsilon(5e-3));
    CHECK(ts.b_star_yc == doctest::Approx(1.2793).epsilon(5e-3));
    // independently re-derived at 30-digit precision (closed-form kernel integrals)
    CHECK(ts.b_star_yc == doctest::Approx(1.28362722912).epsilon(1e-8));
    CHECK(ts.a_star_yc == doctest::Approx(0.922680446023).epsilon(1e-8));
    CHECK(ts.y_c == doctest::Approx(0.926827229125).epsilon(1e-8));
}

TEST_CASE("smaller risk aversion widens the take-profit band") {
    // rho = 0 row of the comparative statics
    omega::Preferences p{0.18, 1.0, 0.3568, 0.0, 1.0};
    const ThresholdEngine eng(fx::base_model(), p);
    const auto ts = eng.solve();
    CHECK(ts.b_low == doctest::Approx(0.2349).epsilon(5e-3));
    CHECK(ts.b_star_yc == doctest::Approx(1.8713).epsilon(5e-3));
}

TEST_CASE("take-profit levels fall as risk aversion grows") {
    const auto m = fx::base_model();
    double prev_blow = 1e9, prev_zc = 1e9;
    for (double rho : {0.0, 0.25, 0.5}) {
        omega::Preferences p{0.18, 1.0, 0.3568, rho, 1.0};
        const ThresholdEngine eng(m, p);
        CHECK(eng.b_low() < prev_blow);
        CHECK(eng.z_c() < prev_zc);
        prev_blow = eng.b_low();
        prev_zc = eng.z_c();
    }
}

TEST_CASE("threshold shift by a price scale") {
    const ThresholdEngine eng(fx::base_model(), fx::severe_low_prefs());
    const auto ts = eng.solve();
    const double lk = std::log(10.0);
    const auto sh = ts.shifted(lk);
    CHECK(sh.b_low == doctest::Approx(ts.b_low + lk).epsilon(1e-14));
    CHECK(sh.z_c == doctest::Approx(ts.z_c + lk).epsilon(1e-14));
    CHECK(sh.y_c == doctest::Approx(ts.y_c + lk).epsilon(1e-14));
    CHECK(sh.b_star_yc == doctest::Approx(ts.b_star_yc + lk).epsilon(1e-14));
    CHECK(sh.y_hat == doctest::Approx(ts.y_hat + lk).epsilon(1e-14));
    // gaps are scale invariant
    CHECK(sh.b_star_yc - sh.y_c == doctest::Approx(ts.b_star_yc - ts.y_c).epsilon(1e-12));
    CHECK(sh.u_bar == doctest::Approx(ts.u_bar).epsilon(1e-14));  // an offset, not a level
}
