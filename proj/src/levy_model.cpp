#include "omega/levy_model.hpp"

#include <cmath>
#include <sstream>

#include "omega/errors.hpp"
#include "omega/roots.hpp"

namespace omega {

double JumpSpec::total_rate() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.rate;
    return s;
}

double psi(const LevyModel& m, double beta) {
    double v = m.mu * beta + 0.5 * m.sigma * m.sigma * beta * beta;
    for (const auto& t : m.jumps.terms) v -= t.rate * beta / (beta + t.decay);
    return v;
}

std::complex<double> psi(const LevyModel& m, std::complex<double> beta) {
    std::complex<double> v = m.mu * beta + 0.5 * m.sigma * m.sigma * beta * beta;
    for (const auto& t : m.jumps.terms) v -= t.rate * beta / (beta + t.decay);
    return v;
}

double psi_prime(const LevyModel& m, double beta) {
    double v = m.mu + m.sigma * m.sigma * beta;
    for (const auto& t : m.jumps.terms) {
        const double d = beta + t.decay;
        v -= t.rate * t.decay / (d * d);
    }
    return v;
}

std::complex<double> psi_prime(const LevyModel& m, std::complex<double> beta) {
    std::complex<double> v = m.mu + m.sigma * m.sigma * beta;
    for (const auto& t : m.jumps.terms) {
        const std::complex<double> d = beta + t.decay;
        v -= t.rate * t.decay / (d * d);
    }
    return v;
}

double phi(const LevyModel& m, double rate) {
    if (!(rate > 0.0)) throw validation_error("phi: rate must be positive");
    // psi(0) = 0 and psi is convex increasing to +inf on [0,inf)
    double hi = 1.0;
    while (psi(m, hi) < rate) {
        hi *= 2.0;
        if (hi > 1e12) throw numeric_error("phi: failed to bracket root");
    }
    double root = brent([&](double b) { return psi(m, b) - rate; }, 0.0, hi, 1e-13);
    for (int i = 0; i < 2; ++i) { // polish
        const double f = psi(m, root) - rate, fp = psi_prime(m, root);
        if (fp != 0.0) root -= f / fp;
    }
    return root;
}

ValidationReport validate(const LevyModel& m, const Preferences& p) {
    ValidationReport rep;
    auto add = [&rep](const std::string& s) { rep.violations.push_back(s); };

    if (!(m.sigma > 0.0)) add("sigma must be positive");
    int i = 0;
    for (const auto& t : m.jumps.terms) {
        ++i;
        std::ostringstream os;
        if (!(t.rate > 0.0)) {
            os << "jump." << i << ".rate must be positive";
            add(os.str());
        } else if (!(t.decay > 1.0)) {
            os << "jump." << i << ".decay must exceed 1";
            add(os.str());
        }
    }
    if (!(p.r > 0.0)) add("r must be positive");
    if (!(p.q > 0.0)) add("q must be positive");
    if (!(p.c >= 0.0)) add("c must be non-negative");
    if (!(p.rho >= 0.0 && p.rho < 1.0)) add("rho must lie in [0,1)");
    if (!(p.K >= 1.0)) add("K must be at least 1");
    if (p.K > 1.0 && p.rho != 0.0) add("K > 1 requires rho = 0");

    if (rep.ok()) {
        // discounting must dominate the growth rate of the asset
        if (!(p.r > psi(m, 1.0))) add("require r > psi(1)");
    }
    return rep;
}

double crra_of_log(double x, double rho) {
    const double a = 1.0 - rho;
    return std::expm1(a * x) / a;
}

double crra_of_log_dx(double x, double rho) {
    return std::exp((1.0 - rho) * x);
}

} // namespace omega
