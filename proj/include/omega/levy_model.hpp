#pragma once

#include <complex>
#include <string>
#include <vector>

namespace omega {

// one exponential component of the (spectrally negative) jump mixture:
// arrivals at intensity `rate`, sizes distributed as -Exp(`decay`)
struct JumpTerm {
    double rate = 0.0;
    double decay = 0.0;
};

struct JumpSpec {
    std::vector<JumpTerm> terms;
    double total_rate() const;
};

// log-price X = mu*t + sigma*B_t - compound Poisson (downward jumps)
struct LevyModel {
    double mu = 0.0;
    double sigma = 0.0;
    JumpSpec jumps;
};

struct Preferences {
    double r = 0.0;    // base discount rate
    double q = 0.0;    // extra discounting while in deep drawdown
    double c = 0.0;    // drawdown tolerance
    double rho = 0.0;  // relative risk aversion, in [0,1)
    double K = 1.0;    // utility scale; K > 1 only allowed with rho = 0
};

// Laplace exponent: psi(b) = mu*b + sigma^2 b^2/2 - sum_i rate_i*b/(b+decay_i)
double psi(const LevyModel& m, double beta);
std::complex<double> psi(const LevyModel& m, std::complex<double> beta);
double psi_prime(const LevyModel& m, double beta);
std::complex<double> psi_prime(const LevyModel& m, std::complex<double> beta);

// largest (real, nonnegative) root of psi(beta) = rate; requires rate > 0
double phi(const LevyModel& m, double rate);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const LevyModel& m, const Preferences& p);

// CRRA utility of a unit-scale price e^x, as a function of the log price:
// (e^{(1-rho)x} - 1)/(1-rho); rho = 1 is excluded by validation
double crra_of_log(double x, double rho);
double crra_of_log_dx(double x, double rho);

} // namespace omega
