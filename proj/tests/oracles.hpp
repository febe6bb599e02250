#pragma once

// Independent reference values for the function kernel, computed in long
// double through a different route than the library: lattice invariants from
// exponentially convergent cotangent sums and the local expansion from the
// standard quadratic recursion.  Valid for |z| well inside the first cell.

#include <complex>
#include <stdexcept>
#include <vector>

namespace oracles {

using lcplx = std::complex<long double>;

constexpr long double kPiL = 3.14159265358979323846264338327950288L;

// sum over m of (m+x)^-4 and (m+x)^-6 via derivatives of pi^2 csc^2(pi x)
inline lcplx s4(lcplx x) {
    lcplx s = lcplx(1.0L) / (std::sin(kPiL * x) * std::sin(kPiL * x));
    lcplx c = std::cos(kPiL * x) / std::sin(kPiL * x);
    long double p4 = kPiL * kPiL * kPiL * kPiL;
    return p4 / 3.0L * s * (2.0L * c * c + s);
}

inline lcplx s6(lcplx x) {
    lcplx s = lcplx(1.0L) / (std::sin(kPiL * x) * std::sin(kPiL * x));
    lcplx c = std::cos(kPiL * x) / std::sin(kPiL * x);
    long double p6 = kPiL * kPiL * kPiL * kPiL * kPiL * kPiL;
    return p6 / 15.0L * (2.0L * s * c * c * c * c + 11.0L * s * s * c * c + 2.0L * s * s * s);
}

struct LocalExpansion {
    lcplx g2, g3;
    std::vector<lcplx> c;  // wp(z) = z^-2 + sum c[k] z^(2k), k >= 1

    static LocalExpansion make(lcplx w1, lcplx w3, int terms = 24) {
        lcplx tau = w3 / w1;
        lcplx G4 = 2.0L * (kPiL * kPiL * kPiL * kPiL / 90.0L);
        lcplx G6 = 2.0L * (kPiL * kPiL * kPiL * kPiL * kPiL * kPiL / 945.0L);
        for (int n = 1; n < 80; ++n) {
            lcplx t4 = 2.0L * s4(static_cast<long double>(n) * tau);
            lcplx t6 = 2.0L * s6(static_cast<long double>(n) * tau);
            G4 += t4;
            G6 += t6;
            if (std::abs(t4) < 1e-24L * std::abs(G4) && std::abs(t6) < 1e-24L * std::abs(G6)) break;
        }
        lcplx cell4 = std::pow(2.0L * w1, 4);
        lcplx cell6 = std::pow(2.0L * w1, 6);
        LocalExpansion e;
        e.g2 = 60.0L * G4 / cell4;
        e.g3 = 140.0L * G6 / cell6;
        e.c.assign(static_cast<std::size_t>(terms) + 1, lcplx(0.0L));
        e.c[1] = e.g2 / 20.0L;
        e.c[2] = e.g3 / 28.0L;
        for (int k = 3; k <= terms; ++k) {
            lcplx acc(0.0L);
            for (int m = 1; m <= k - 2; ++m) acc += e.c[m] * e.c[k - 1 - m];
            e.c[k] = 3.0L * acc / ((2.0L * k + 3.0L) * (k - 2.0L));
        }
        return e;
    }

    lcplx wp(lcplx z) const {
        lcplx acc = 1.0L / (z * z);
        lcplx z2 = z * z, p = z2;
        for (std::size_t k = 1; k < c.size(); ++k) {
            acc += c[k] * p;
            p *= z2;
        }
        return acc;
    }

    lcplx zeta(lcplx z) const {
        lcplx acc = 1.0L / z;
        lcplx z2 = z * z, p = z * z2;
        for (std::size_t k = 1; k < c.size(); ++k) {
            acc -= c[k] * p / (2.0L * k + 1.0L);
            p *= z2;
        }
        return acc;
    }

    lcplx sigma(lcplx z) const {
        lcplx acc(0.0L);
        lcplx z2 = z * z, p = z2 * z2;
        for (std::size_t k = 1; k < c.size(); ++k) {
            acc -= c[k] * p / ((2.0L * k + 1.0L) * (2.0L * k + 2.0L));
            p *= z2;
        }
        return z * std::exp(acc);
    }
};

inline std::complex<double> down(lcplx z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace oracles
