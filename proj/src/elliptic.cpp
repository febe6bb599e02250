#include "spinrs/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(cplx z, const char* who) {
    if (!finite(z)) throw std::invalid_argument(std::string(who) + ": non-finite argument");
}

void require_off_lattice(const LatticeSpec& L, cplx z, const char* who) {
    if (L.near_lattice(z, kPoleTol)) throw std::domain_error(std::string(who) + ": argument within 1e-12 of a pole");
}

}  // namespace

cplx sigma(const LatticeSpec& L, cplx z) {
    require_finite(z, "sigma");
    switch (L.mode()) {
        case LatticeMode::rational:
            return z;
        case LatticeMode::trigonometric: {
            auto r = L.reduce(z);
            // sigma(z + 2m w1) = (-1)^m sigma(z) exp(2 m eta1 (z + m w1))
            cplx zr = r.z_red;
            double m = static_cast<double>(r.m);
            cplx pref = std::exp(2.0 * m * L.eta1() * (zr + m * L.omega1()));
            if (r.m % 2 != 0) pref = -pref;
            cplx core = std::exp(L.nu_ * L.nu_ * zr * zr / 6.0) * std::sin(L.nu_ * zr) / L.nu_;
            return pref * core;
        }
        case LatticeMode::elliptic:
        default: {
            auto r = L.reduce(z);
            cplx zr = r.z_red;
            double m = static_cast<double>(r.m), n = static_cast<double>(r.n);
            cplx eta_w = 2.0 * m * L.eta1() + 2.0 * n * L.eta3();
            cplx pref = std::exp(eta_w * (zr + m * L.omega1() + n * L.omega3()));
            if ((r.m + r.n + r.m * r.n) % 2 != 0) pref = -pref;
            cplx v = kPi * zr / (2.0 * L.omega1());
            auto th = L.theta1_block(v, 1);
            cplx core = 2.0 * L.omega1() * std::exp(L.eta1() * zr * zr / (2.0 * L.omega1())) * th.t0 /
                        (kPi * L.theta1p0_);
            return pref * core;
        }
    }
}

cplx zeta(const LatticeSpec& L, cplx z) {
    require_finite(z, "zeta");
    require_off_lattice(L, z, "zeta");
    switch (L.mode()) {
        case LatticeMode::rational:
            return 1.0 / z;
        case LatticeMode::trigonometric: {
            auto r = L.reduce(z);
            cplx zr = r.z_red;
            cplx nu = L.nu_;
            return nu * nu * zr / 3.0 + nu * std::cos(nu * zr) / std::sin(nu * zr) +
                   2.0 * static_cast<double>(r.m) * L.eta1();
        }
        case LatticeMode::elliptic:
        default: {
            auto r = L.reduce(z);
            cplx zr = r.z_red;
            cplx v = kPi * zr / (2.0 * L.omega1());
            auto th = L.theta1_block(v, 1);
            return L.eta1() * zr / L.omega1() + kPi / (2.0 * L.omega1()) * (th.t1 / th.t0) +
                   2.0 * static_cast<double>(r.m) * L.eta1() + 2.0 * static_cast<double>(r.n) * L.eta3();
        }
    }
}

cplx wp(const LatticeSpec& L, cplx z) {
    require_finite(z, "wp");
    require_off_lattice(L, z, "wp");
    switch (L.mode()) {
        case LatticeMode::rational:
            return 1.0 / (z * z);
        case LatticeMode::trigonometric: {
            auto r = L.reduce(z);
            cplx s = std::sin(L.nu_ * r.z_red);
            cplx nu2 = L.nu_ * L.nu_;
            return nu2 * (1.0 / (s * s) - 1.0 / 3.0);
        }
        case LatticeMode::elliptic:
        default: {
            auto r = L.reduce(z);
            cplx v = kPi * r.z_red / (2.0 * L.omega1());
            auto th = L.theta1_block(v, 2);
            cplx lt = th.t1 / th.t0;
            cplx scale = kPi / (2.0 * L.omega1());
            return -L.eta1() / L.omega1() - scale * scale * (th.t2 / th.t0 - lt * lt);
        }
    }
}

cplx v_potential(const LatticeSpec& L, cplx x, cplx eta) {
    return zeta(L, x + eta) - zeta(L, x);
}

cplx v_tilde(const LatticeSpec& L, cplx x, cplx z0) {
    return zeta(L, x + z0) - zeta(L, x);
}

cplx zeta_bracket(const LatticeSpec& L, cplx x, cplx c) {
    return zeta(L, x + c) + zeta(L, x - c) - 2.0 * zeta(L, x);
}

BranchDatum make_branch(const LatticeSpec& L, cplx z, cplx eta) {
    require_finite(z, "make_branch");
    require_finite(eta, "make_branch");
    require_off_lattice(L, z - eta, "make_branch");
    require_off_lattice(L, z + eta, "make_branch");
    BranchDatum b;
    b.w = std::log(sigma(L, z - eta) / sigma(L, z + eta));
    return b;
}

cplx phi(const LatticeSpec& L, cplx x, cplx z, cplx eta, const BranchDatum& branch) {
    require_finite(x, "phi");
    require_finite(z, "phi");
    if (L.near_lattice(eta, kPoleTol) || L.near_lattice(2.0 * eta, kPoleTol))
        throw std::domain_error("phi: eta or 2*eta within 1e-12 of the lattice");
    require_off_lattice(L, x, "phi");
    require_off_lattice(L, z + eta, "phi");
    cplx ratio = sigma(L, z - eta) / sigma(L, z + eta);
    if (std::abs(std::exp(branch.w) - ratio) > 1e-8 * std::abs(ratio))
        throw std::invalid_argument("phi: branch datum inconsistent with (z, eta)");
    return sigma(L, z + x + eta) / (sigma(L, z + eta) * sigma(L, x)) * std::exp(x * branch.w / (2.0 * eta));
}

double sigma_three_term_residual(const LatticeSpec& L, cplx a, cplx b, cplx c, cplx d) {
    cplx t1 = sigma(L, a + c) * sigma(L, a - c) * sigma(L, b + d) * sigma(L, b - d);
    cplx t2 = sigma(L, a + d) * sigma(L, a - d) * sigma(L, b + c) * sigma(L, b - c);
    cplx t3 = sigma(L, a + b) * sigma(L, a - b) * sigma(L, c + d) * sigma(L, c - d);
    return std::abs(t1 - t2 - t3);
}

double zeta_sigma_residual(const LatticeSpec& L, cplx a, cplx b, cplx c) {
    cplx lhs = zeta(L, a) + zeta(L, b) + zeta(L, c) - zeta(L, a + b + c);
    cplx rhs = sigma(L, a + b) * sigma(L, b + c) * sigma(L, a + c) /
               (sigma(L, a) * sigma(L, b) * sigma(L, c) * sigma(L, a + b + c));
    return std::abs(lhs - rhs);
}

}  // namespace spinrs
