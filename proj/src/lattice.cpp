#include "spinrs/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kMaxThetaTerms = 200;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

LatticeSpec LatticeSpec::elliptic(cplx omega1, cplx omega3) {
    if (!finite(omega1) || !finite(omega3)) throw std::invalid_argument("lattice: non-finite periods");
    if (omega1 == cplx(0.0)) throw std::invalid_argument("lattice: omega1 = 0");
    LatticeSpec L;
    L.mode_ = LatticeMode::elliptic;
    L.w1_ = omega1;
    L.w3_ = omega3;
    L.tau_ = omega3 / omega1;
    if (!(L.tau_.imag() > 0.0)) throw std::invalid_argument("lattice: Im(omega3/omega1) must be positive");
    L.log_q_ = cplx(0.0, kPi) * L.tau_;
    L.q_ = std::exp(L.log_q_);
    if (std::abs(L.q_) > kNomeCap) throw std::domain_error("lattice: nome too large, |q| > 0.95");
    L.init_elliptic();
    return L;
}

LatticeSpec LatticeSpec::trigonometric(cplx omega1) {
    if (!finite(omega1)) throw std::invalid_argument("lattice: non-finite omega1");
    if (omega1 == cplx(0.0)) throw std::invalid_argument("lattice: omega1 = 0");
    LatticeSpec L;
    L.mode_ = LatticeMode::trigonometric;
    L.w1_ = omega1;
    L.nu_ = cplx(kPi) / (2.0 * omega1);
    L.eta1_ = L.nu_ * L.nu_ * omega1 / 3.0;
    return L;
}

LatticeSpec LatticeSpec::rational() { return LatticeSpec(); }

LatticeSpec LatticeSpec::rectangular(double omega1, double omega3_imag) {
    if (!(omega1 > 0.0) || !(omega3_imag > 0.0))
        throw std::invalid_argument("lattice: rectangular preset needs omega1 > 0 and omega3_imag > 0");
    return elliptic(cplx(omega1, 0.0), cplx(0.0, omega3_imag));
}

void LatticeSpec::init_elliptic() {
    // theta1'(0) and theta1'''(0) from the v = 0 series.
    Theta1Block b0 = theta1_block(cplx(0.0), 3);
    theta1p0_ = b0.t1;
    if (theta1p0_ == cplx(0.0)) throw std::runtime_error("lattice: degenerate theta constants");
    eta1_ = -(kPi * kPi) / (12.0 * w1_) * (b0.t3 / theta1p0_);
    // eta3 = zeta(omega3) straight from the series (v = pi*tau/2 is off-pole),
    // so the Legendre relation below is a genuine consistency check.
    cplx v3 = kPi * w3_ / (2.0 * w1_);
    Theta1Block b3 = theta1_block(v3, 1);
    eta3_ = eta1_ * w3_ / w1_ + kPi / (2.0 * w1_) * (b3.t1 / b3.t0);
    cplx legendre = eta1_ * w3_ - eta3_ * w1_ - cplx(0.0, kPi / 2.0);
    if (std::abs(legendre) > 1e-10 * (1.0 + std::abs(eta1_ * w3_)))
        throw std::runtime_error("lattice: Legendre consistency failure");
}

LatticeSpec::Theta1Block LatticeSpec::theta1_block(cplx v, int max_order) const {
    // theta1(v)   = sum (-1)^n * (-i) * (E+ - E-)
    // theta1'(v)  = sum (-1)^n * (2n+1) * (E+ + E-)
    // theta1''(v) = sum (-1)^n * i * (2n+1)^2 * (E+ - E-)
    // theta1'''(v)= sum (-1)^n * -(2n+1)^3 * (E+ + E-)
    // with E+- = exp((n+1/2)^2 log q +- i(2n+1) v); the fused exponent keeps
    // every term finite even when q-powers underflow or sin factors are huge.
    // Truncation compares each term envelope against the accumulated
    // absolute-value sum, so zeros of theta1 or its derivatives cannot stall
    // the stop test.
    const cplx I(0.0, 1.0);
    Theta1Block acc{cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)};
    double env_sum = 0.0;
    int small_streak = 0;
    for (int n = 0; n < kMaxThetaTerms; ++n) {
        double half = n + 0.5;
        double odd = 2.0 * n + 1.0;
        cplx base = (half * half) * log_q_;
        cplx ep = std::exp(base + I * odd * v);
        cplx em = std::exp(base - I * odd * v);
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        cplx diff = ep - em;
        cplx sum = ep + em;
        acc.t0 += sign * (-I) * diff;
        acc.t1 += sign * odd * sum;
        if (max_order >= 2) acc.t2 += sign * I * (odd * odd) * diff;
        if (max_order >= 3) acc.t3 += sign * (-(odd * odd * odd)) * sum;
        double env = (std::abs(ep) + std::abs(em)) * odd * odd * odd;
        env_sum += env;
        if (n >= 1 && env < 1e-16 * env_sum) {
            if (++small_streak >= 2) return acc;
        } else {
            small_streak = 0;
        }
    }
    throw std::runtime_error("lattice: theta series did not converge");
}

LatticeSpec::Reduction LatticeSpec::reduce(cplx z) const {
    Reduction r;
    r.z_red = z;
    if (mode_ == LatticeMode::rational) return r;
    if (mode_ == LatticeMode::trigonometric) {
        double alpha = (z / (2.0 * w1_)).real();
        r.m = static_cast<long>(std::floor(alpha + 0.5));
        r.z_red = z - 2.0 * static_cast<double>(r.m) * w1_;
        return r;
    }
    // invert [Re z; Im z] = [2Re w1  2Re w3; 2Im w1  2Im w3] [alpha; beta]
    double a = 2.0 * w1_.real(), b = 2.0 * w3_.real();
    double c = 2.0 * w1_.imag(), d = 2.0 * w3_.imag();
    double det = a * d - b * c;
    double alpha = (d * z.real() - b * z.imag()) / det;
    double beta = (a * z.imag() - c * z.real()) / det;
    r.m = static_cast<long>(std::floor(alpha + 0.5));
    r.n = static_cast<long>(std::floor(beta + 0.5));
    r.z_red = z - 2.0 * static_cast<double>(r.m) * w1_ - 2.0 * static_cast<double>(r.n) * w3_;
    return r;
}

double LatticeSpec::lattice_distance(cplx z) const {
    if (mode_ == LatticeMode::rational) return std::abs(z);
    Reduction r = reduce(z);
    double best = std::abs(r.z_red);
    if (mode_ == LatticeMode::trigonometric) {
        best = std::min(best, std::abs(r.z_red - 2.0 * w1_));
        best = std::min(best, std::abs(r.z_red + 2.0 * w1_));
        return best;
    }
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn) {
            cplx shift = 2.0 * static_cast<double>(dm) * w1_ + 2.0 * static_cast<double>(dn) * w3_;
            best = std::min(best, std::abs(r.z_red - shift));
        }
    return best;
}

bool LatticeSpec::near_lattice(cplx z, double tol) const { return lattice_distance(z) < tol; }

std::string LatticeSpec::mode_name() const {
    switch (mode_) {
        case LatticeMode::elliptic: return "elliptic";
        case LatticeMode::trigonometric: return "trigonometric";
        default: return "rational";
    }
}

}  // namespace spinrs
