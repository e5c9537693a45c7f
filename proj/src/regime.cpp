#include "omega/regime.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "omega/errors.hpp"
#include "omega/roots.hpp"

namespace omega {

double g_fn(const OccupationKernel& ok, double rho, double x) {
    const double a = 1.0 - rho;
    return std::exp(a * x) * (1.0 / a - 1.0 / ok.lambda(x));
}

double g_fn_dx(const OccupationKernel& ok, double rho, double x) {
    const double a = 1.0 - rho;
    const double lam = ok.lambda(x);
    return std::exp(a * x) * (a * (1.0 / a - 1.0 / lam) + ok.lambda_dx(x) / (lam * lam));
}

double h_star_stat(const LevyModel& m, const Preferences& p) {
    // sigma > 0, so W(0) = 0 and W'(0+) = 2/sigma^2
    const double phi_rq = phi(m, p.r + p.q);
    return (phi_rq - 1.0 + p.rho) * phi_rq - 2.0 * p.q / (m.sigma * m.sigma);
}

RegimeReport classify(const OccupationKernel& ok, const Preferences& p,
                      double x_max, int grid) {
    RegimeReport rep;
    rep.h_star = h_star_stat(ok.w().model(), p);
    rep.severe = rep.h_star < 0.0;
    const double a = 1.0 - p.rho;
    rep.g_zero_minus = 1.0 / a - 1.0 / ok.phi_rq();
    rep.g_zero_plus = 1.0 / a - 1.0 / ok.lambda(std::nextafter(0.0, 1.0));

    if (!rep.severe) {
        rep.u_bar = -std::numeric_limits<double>::infinity();
        rep.y_bar = std::numeric_limits<double>::infinity();
        return rep;
    }

    // u_bar: rightmost sign change of g' from negative to positive
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double hi_x = x_max * (attempt + 1);
        double found = std::numeric_limits<double>::quiet_NaN();
        double x0 = hi_x / grid;
        double d0 = g_fn_dx(ok, p.rho, x0);
        for (int i = 2; i <= grid; ++i) {
            const double x1 = hi_x * i / grid;
            const double d1 = g_fn_dx(ok, p.rho, x1);
            if (d0 < 0.0 && d1 >= 0.0) found = brent([&](double u) {
                    return g_fn_dx(ok, p.rho, u);
                }, x0, x1, 1e-10);
            x0 = x1;
            d0 = d1;
        }
        if (std::isfinite(found)) {
            rep.u_bar = found;
            const double gmin = g_fn(ok, p.rho, found);
            if (!(gmin > 0.0)) throw numeric_error("regime: g must stay positive");
            rep.y_bar = -std::log(a * gmin) / a;
            return rep;
        }
    }
    throw numeric_error("regime: severe statistic but no interior minimum of g found");
}

RegimeReport classify(const LevyModel& m, const Preferences& p) {
    OccupationKernel ok(ScaleFn(m, p.r), phi(m, p.r + p.q));
    return classify(ok, p);
}

} // namespace omega
