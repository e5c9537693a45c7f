#include "omega/scale_functions.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "omega/errors.hpp"
#include "omega/quadrature.hpp"

namespace omega {

namespace {

using cplx = std::complex<double>;

// ascending-coefficient polynomial product
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

void poly_add(std::vector<double>& a, const std::vector<double>& b, double scale) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
}

// (psi(beta) - rate) * prod_i (beta + eta_i), ascending coefficients
std::vector<double> cleared_poly(const LevyModel& m, double rate) {
    std::vector<double> base{-rate, m.mu, 0.5 * m.sigma * m.sigma};
    std::vector<double> p = base;
    for (const auto& t : m.jumps.terms) p = poly_mul(p, {t.decay, 1.0});
    const std::size_t n = m.jumps.terms.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> others{0.0, m.jumps.terms[i].rate}; // rate_i * beta
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            others = poly_mul(others, {m.jumps.terms[k].decay, 1.0});
        }
        poly_add(p, others, -1.0);
    }
    return p;
}

std::vector<cplx> companion_roots(const std::vector<double>& coeffs) {
    const int n = int(coeffs.size()) - 1;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<cplx> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

} // namespace

ScaleFn::ScaleFn(const LevyModel& model, double rate) : model_(model), rate_(rate) {
    if (!(model.sigma > 0.0)) throw validation_error("scale function requires sigma > 0");
    if (!(rate > 0.0)) throw validation_error("scale function requires rate > 0");

    auto roots = companion_roots(cleared_poly(model, rate));
    for (auto& z : roots) { // polish on the rational form psi - rate
        for (int it = 0; it < 3; ++it) {
            const cplx f = psi(model_, z) - rate_;
            const cplx fp = psi_prime(model_, z);
            if (std::abs(fp) == 0.0) break;
            z -= f / fp;
        }
        if (std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z.real()))) z.imag(0.0);
    }
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    for (const auto& z : roots) {
        const double res = std::abs(psi(model_, z) - rate_);
        if (res > 1e-8 * std::max(1.0, rate_))
            throw numeric_error("scale function: root residual too large");
    }

    phi_ = roots.back().real();
    if (roots.back().imag() != 0.0 || !(phi_ > 0.0))
        throw numeric_error("scale function: largest root must be real positive");

    // weights 1/psi'(z); near-double roots merged into (c1 + c2 x) e^{z x}
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::size_t pair = i;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[i] - roots[j]) < 1e-8 * std::max(1.0, std::abs(roots[i]))) {
                pair = j;
                break;
            }
        }
        if (pair == i) {
            terms_.push_back({1.0 / psi_prime(model_, roots[i]), roots[i], 0});
            continue;
        }
        used[pair] = true;
        confluent_ = true;
        const cplx z = 0.5 * (roots[i] + roots[pair]);
        // 1/(psi-rate) = Q/P with Q = prod(beta+eta), P = lead*(beta-z)^2*T(beta)
        cplx qv = 1.0, qd = 0.0; // Q and Q'
        for (const auto& t : model_.jumps.terms) {
            qd = qd * (z + t.decay) + qv;
            qv *= (z + t.decay);
        }
        cplx tv = 0.5 * model_.sigma * model_.sigma, tlog = 0.0; // lead*T and T'/T
        for (std::size_t k = 0; k < roots.size(); ++k) {
            if (k == i || k == pair) continue;
            tv *= (z - roots[k]);
            tlog += 1.0 / (z - roots[k]);
        }
        const cplx c2 = qv / tv;
        const cplx c1 = c2 * (qd / qv - tlog);
        terms_.push_back({c1, z, 0});
        terms_.push_back({c2, z, 1});
    }
}

double ScaleFn::value(double x) const {
    if (x < 0.0) return 0.0;
    cplx s = 0.0;
    for (const auto& t : terms_) {
        const cplx e = std::exp(t.root * x);
        s += t.weight * (t.power ? x * e : e);
    }
    return s.real();
}

double ScaleFn::deriv(double x) const {
    if (x < 0.0) return 0.0;
    cplx s = 0.0;
    for (const auto& t : terms_) {
        const cplx e = std::exp(t.root * x);
        s += t.weight * (t.power ? (1.0 + t.root * x) * e : t.root * e);
    }
    return s.real();
}

double ScaleFn::deriv2(double x) const {
    if (x < 0.0) return 0.0;
    cplx s = 0.0;
    for (const auto& t : terms_) {
        const cplx e = std::exp(t.root * x);
        s += t.weight * (t.power ? (2.0 * t.root + t.root * t.root * x) * e
                                 : t.root * t.root * e);
    }
    return s.real();
}

OccupationKernel::OccupationKernel(ScaleFn w_r, double phi_rq)
    : w_(std::move(w_r)), phi_rq_(phi_rq) {
    if (!(phi_rq_ > w_.phi_root()))
        throw validation_error("occupation kernel requires phi(r+q) > phi(r)");
    for (const auto& t : w_.terms()) {
        const cplx d = phi_rq_ - t.root;
        if (t.power == 0) {
            iterms_.push_back({t.weight / d, t.root, 0});
        } else {
            iterms_.push_back({t.weight / d, t.root, 1});
            iterms_.push_back({t.weight / (d * d), t.root, 0});
        }
    }
    cplx s = 0.0;
    for (const auto& t : iterms_)
        if (t.power == 0) s += t.weight;
    i0_ = s.real();
}

void OccupationKernel::scaled_sums(double x, double& n0, double& n1, double& n2) const {
    // sums of I, I', I'' terms times e^{-phi_r x}; exponents never overflow
    const double shift = w_.phi_root();
    cplx s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (const auto& t : iterms_) {
        const cplx z = t.root;
        const cplx e = std::exp((z - shift) * x);
        if (t.power == 0) {
            s0 += t.weight * e;
            s1 += t.weight * z * e;
            s2 += t.weight * z * z * e;
        } else {
            s0 += t.weight * x * e;
            s1 += t.weight * (1.0 + z * x) * e;
            s2 += t.weight * (2.0 * z + z * z * x) * e;
        }
    }
    n0 = s0.real();
    n1 = s1.real();
    n2 = s2.real();
}

double OccupationKernel::I(double x) const {
    if (x < 0.0) return std::exp(phi_rq_ * x) * i0_;
    double n0, n1, n2;
    scaled_sums(x, n0, n1, n2);
    return std::exp(w_.phi_root() * x) * n0;
}

double OccupationKernel::I_dx(double x) const {
    if (x < 0.0) return phi_rq_ * std::exp(phi_rq_ * x) * i0_;
    double n0, n1, n2;
    scaled_sums(x, n0, n1, n2);
    return std::exp(w_.phi_root() * x) * n1;
}

double OccupationKernel::lambda(double x) const {
    if (x <= 0.0) return phi_rq_;
    double n0, n1, n2;
    scaled_sums(x, n0, n1, n2);
    if (!(n0 > 0.0)) throw numeric_error("occupation kernel: I must stay positive");
    return n1 / n0;
}

double OccupationKernel::lambda_dx(double x) const {
    if (x <= 0.0) return 0.0;
    double n0, n1, n2;
    scaled_sums(x, n0, n1, n2);
    if (!(n0 > 0.0)) throw numeric_error("occupation kernel: I must stay positive");
    const double l = n1 / n0;
    return n2 / n0 - l * l;
}

TwoRateKernel::TwoRateKernel(const LevyModel& m, double r, double q)
    : wr_(m, r), wrq_(m, r + q), q_(q) {
    if (!(q > 0.0)) throw validation_error("two-rate kernel requires q > 0");
}

std::complex<double> exp_integral(cplx c, double l, double u) {
    const cplx z = c * (u - l);
    if (std::abs(z) < 1e-6) {
        const cplx w = 0.5 * z;
        const cplx sinhc = 1.0 + w * w / 6.0 * (1.0 + w * w / 20.0);
        return (u - l) * std::exp(c * 0.5 * (l + u)) * sinhc;
    }
    return (std::exp(c * u) - std::exp(c * l)) / c;
}

void TwoRateKernel::coeffs(double x, double y, std::vector<cplx>& out) const {
    const auto& tq = wrq_.terms();
    out.assign(tq.size(), 0.0);
    for (std::size_t j = 0; j < tq.size(); ++j) out[j] = tq[j].weight * std::exp(tq[j].root * x);
    if (x <= y) return;
    if (wr_.has_confluent() || wrq_.has_confluent())
        throw numeric_error("two-rate kernel: confluent roots unsupported in coeff path");
    for (std::size_t j = 0; j < tq.size(); ++j) {
        cplx acc = 0.0;
        for (const auto& ti : wr_.terms())
            acc += ti.weight * std::exp(ti.root * x) * exp_integral(tq[j].root - ti.root, y, x);
        out[j] -= q_ * tq[j].weight * acc;
    }
}

void TwoRateKernel::coeffs_dx(double x, double y, std::vector<cplx>& out) const {
    const auto& tq = wrq_.terms();
    out.assign(tq.size(), 0.0);
    for (std::size_t j = 0; j < tq.size(); ++j)
        out[j] = tq[j].weight * tq[j].root * std::exp(tq[j].root * x);
    if (x <= y) return;
    if (wr_.has_confluent() || wrq_.has_confluent())
        throw numeric_error("two-rate kernel: confluent roots unsupported in coeff path");
    for (std::size_t j = 0; j < tq.size(); ++j) {
        cplx acc = 0.0;
        for (const auto& ti : wr_.terms()) {
            acc += ti.weight * ti.root * std::exp(ti.root * x) *
                   exp_integral(tq[j].root - ti.root, y, x);
            acc += ti.weight * std::exp(tq[j].root * x); // boundary term of d/dx
        }
        out[j] -= q_ * tq[j].weight * acc;
    }
}

double TwoRateKernel::eval_coeffs(const std::vector<cplx>& B, double w) const {
    const auto& tq = wrq_.terms();
    cplx s = 0.0;
    for (std::size_t j = 0; j < tq.size(); ++j) s += B[j] * std::exp(-tq[j].root * w);
    return s.real();
}

double TwoRateKernel::value(double x, double a, double y) const {
    if (a > y) throw validation_error("two-rate kernel requires a <= y");
    if (x <= y) return wrq_.value(x - a);
    if (wr_.has_confluent() || wrq_.has_confluent()) {
        const double corr = integrate(
            [&](double z) { return wr_.value(x - z) * wrq_.value(z - a); }, y, x);
        return wrq_.value(x - a) - q_ * corr;
    }
    cplx corr = 0.0;
    for (const auto& tj : wrq_.terms()) {
        cplx acc = 0.0;
        for (const auto& ti : wr_.terms())
            acc += ti.weight * std::exp(ti.root * x) * exp_integral(tj.root - ti.root, y, x);
        corr += tj.weight * std::exp(-tj.root * a) * acc;
    }
    return wrq_.value(x - a) - q_ * corr.real();
}

double TwoRateKernel::dx(double x, double a, double y) const {
    if (a > y) throw validation_error("two-rate kernel requires a <= y");
    if (x <= y) return wrq_.deriv(x - a);
    if (wr_.has_confluent() || wrq_.has_confluent()) {
        // W^{(r)}(0) = 0 kills the boundary term of d/dx at z = x
        const double corr = integrate(
            [&](double z) { return wr_.deriv(x - z) * wrq_.value(z - a); }, y, x);
        return wrq_.deriv(x - a) - q_ * corr;
    }
    std::vector<cplx> B;
    coeffs_dx(x, y, B);
    return eval_coeffs(B, a);
}

} // namespace omega
