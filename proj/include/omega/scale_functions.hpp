#pragma once

#include <complex>
#include <vector>

#include "omega/levy_model.hpp"

namespace omega {

// one term of an exponential sum: weight * x^power * e^{root * x}
struct ExpTerm {
    std::complex<double> weight;
    std::complex<double> root;
    int power = 0; // 1 only for a merged near-double root pair
};

// scale function W^{(rate)} via partial fractions of 1/(psi - rate)
class ScaleFn {
public:
    ScaleFn(const LevyModel& model, double rate);

    double rate() const { return rate_; }
    double phi_root() const { return phi_; } // largest root of psi = rate
    const std::vector<ExpTerm>& terms() const { return terms_; }
    bool has_confluent() const { return confluent_; }
    const LevyModel& model() const { return model_; }

    double value(double x) const; // 0 for x < 0
    double deriv(double x) const; // right derivative at 0
    double deriv2(double x) const;

private:
    LevyModel model_;
    double rate_;
    double phi_ = 0.0;
    std::vector<ExpTerm> terms_;
    bool confluent_ = false;
};

// I(x) = int_0^inf e^{-phi_rq * u} W^{(r)}(u + x) du, and Lambda = (log I)'
class OccupationKernel {
public:
    OccupationKernel(ScaleFn w_r, double phi_rq);

    double phi_rq() const { return phi_rq_; }
    double phi_r() const { return w_.phi_root(); }
    const ScaleFn& w() const { return w_; }

    double I(double x) const;
    double I_dx(double x) const;
    double lambda(double x) const;    // = phi_rq for x <= 0, decreasing on (0,inf)
    double lambda_dx(double x) const;

private:
    // sums of the partial-fraction terms of I scaled by e^{-phi_r * x}, x >= 0
    void scaled_sums(double x, double& n0, double& n1, double& n2) const;

    ScaleFn w_;
    double phi_rq_;
    std::vector<ExpTerm> iterms_;
    double i0_ = 0.0;
};

// two-rate kernel W^{(r,q)}(x, a; y) for a <= y:
//   W^{(r+q)}(x-a) - q * int_y^{x v y} W^{(r)}(x-z) W^{(r+q)}(z-a) dz
class TwoRateKernel {
public:
    TwoRateKernel(const LevyModel& m, double r, double q);

    const ScaleFn& w_r() const { return wr_; }
    const ScaleFn& w_rq() const { return wrq_; }
    double q() const { return q_; }

    double value(double x, double a, double y) const;
    double dx(double x, double a, double y) const;

    // W^{(r,q)}(x, w; y) = Re sum_j B_j e^{-z_j w} for w <= min(x, y), with
    // z_j the psi = r+q roots; precomputing B makes w-integration cheap
    void coeffs(double x, double y, std::vector<std::complex<double>>& out) const;
    void coeffs_dx(double x, double y, std::vector<std::complex<double>>& out) const;
    double eval_coeffs(const std::vector<std::complex<double>>& B, double w) const;

private:
    ScaleFn wr_, wrq_;
    double q_;
};

// stable int_l^u e^{c w} dw for complex c
std::complex<double> exp_integral(std::complex<double> c, double l, double u);

} // namespace omega
