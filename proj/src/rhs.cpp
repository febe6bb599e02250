#include "spinrs/rhs.hpp"

#include <cmath>

namespace spinrs {

std::string to_string(SignConvention c) { return c == SignConvention::printed ? "printed" : "flipped"; }

std::vector<cplx> rs_accel(const LatticeSpec& L, cplx eta, const std::vector<cplx>& x, const std::vector<cplx>& xdot) {
    if (x.size() != xdot.size()) throw std::invalid_argument("rs_accel: size mismatch between x and xdot");
    const int n = static_cast<int>(x.size());
    std::vector<cplx> acc(n, cplx(0.0));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) {
            if (s == i) continue;
            const cplx d = x[i] - x[s];
            acc[i] += xdot[i] * xdot[s] * (v_potential(L, -d, eta) - v_potential(L, d, eta));
        }
    return acc;
}

std::vector<cplx> spin_rs_fdot(const LatticeSpec& L, cplx eta, SignConvention conv, int n, const std::vector<cplx>& x,
                               const std::vector<cplx>& F) {
    if (static_cast<int>(x.size()) != n || static_cast<int>(F.size()) != n * n)
        throw std::invalid_argument("spin_rs_fdot: state dimensions do not match n");
    // Vm(a,b) = V(x_a - x_b); diagonal unused
    std::vector<cplx> Vm(static_cast<std::size_t>(n) * n, cplx(0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) Vm[static_cast<std::size_t>(a) * n + b] = v_potential(L, x[a] - x[b], eta);

    auto f = [&](int i, int j) { return F[static_cast<std::size_t>(i) * n + j]; };
    auto vm = [&](int a, int b) { return Vm[static_cast<std::size_t>(a) * n + b]; };

    std::vector<cplx> out(static_cast<std::size_t>(n) * n, cplx(0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx r = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k != j) r += f(i, k) * f(k, j) * vm(j, k);
                if (k != i) r -= f(i, k) * f(k, j) * vm(k, i);
            }
            out[static_cast<std::size_t>(i) * n + j] = conv == SignConvention::printed ? r : -r;
        }
    return out;
}

N2Rhs n2_flow_rhs(const LatticeSpec& L, const N2LeafState& s) {
    const cplx D = s.x1 - s.x2;
    const cplx g = zeta_bracket(L, D, s.z0);
    N2Rhs r;
    r.x1dot = s.f1;
    r.x2dot = s.f2;
    r.f1dot = -s.f1 * s.f2 * g;
    r.f2dot = -r.f1dot;
    return r;
}

namespace {

void guard_separations(const LatticeSpec& L, const std::vector<cplx>& x, cplx eta) {
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const cplx d = x[i] - x[j];
            // the potential has poles at d = 0 and d = -eta (in either ordering)
            if (L.lattice_distance(d) < kGuardSeparation || L.lattice_distance(d + eta) < kGuardSeparation ||
                L.lattice_distance(d - eta) < kGuardSeparation)
                throw pole_proximity_error("pair " + std::to_string(i) + "," + std::to_string(j) +
                                           " within 1e-6 of a pole of the potential");
        }
}

}  // namespace

FlatRhs make_rs_system(const LatticeSpec& L, cplx eta, int n) {
    return [L, eta, n](double, const std::vector<cplx>& y) {
        if (static_cast<int>(y.size()) != 2 * n) throw std::invalid_argument("rs system: expected state length 2n");
        std::vector<cplx> x(y.begin(), y.begin() + n), v(y.begin() + n, y.end());
        guard_separations(L, x, eta);
        std::vector<cplx> acc = rs_accel(L, eta, x, v);
        std::vector<cplx> dy(2 * n);
        for (int i = 0; i < n; ++i) {
            dy[i] = v[i];
            dy[n + i] = acc[i];
        }
        return dy;
    };
}

FlatRhs make_spin_system(const LatticeSpec& L, cplx eta, SignConvention conv, int n) {
    return [L, eta, conv, n](double, const std::vector<cplx>& y) {
        if (static_cast<int>(y.size()) != n + n * n)
            throw std::invalid_argument("spin system: expected state length n + n^2");
        std::vector<cplx> x(y.begin(), y.begin() + n), F(y.begin() + n, y.end());
        guard_separations(L, x, eta);
        std::vector<cplx> fdot = spin_rs_fdot(L, eta, conv, n, x, F);
        std::vector<cplx> dy(n + n * n);
        for (int i = 0; i < n; ++i) dy[i] = F[static_cast<std::size_t>(i) * n + i];
        for (int k = 0; k < n * n; ++k) dy[n + k] = fdot[k];
        return dy;
    };
}

FlatRhs make_n2_system(const LatticeSpec& L, cplx eta, cplx z0) {
    return [L, eta, z0](double, const std::vector<cplx>& y) {
        if (y.size() != 4) throw std::invalid_argument("n2 system: expected state length 4");
        const cplx D = y[0] - y[1];
        if (L.lattice_distance(D) < kGuardSeparation || L.lattice_distance(D + z0) < kGuardSeparation ||
            L.lattice_distance(D - z0) < kGuardSeparation)
            throw pole_proximity_error("leaf coordinate within 1e-6 of a pole of the bracket");
        N2LeafState s{y[0], y[1], y[2], y[3], z0, eta};
        N2Rhs r = n2_flow_rhs(L, s);
        return std::vector<cplx>{r.x1dot, r.x2dot, r.f1dot, r.f2dot};
    };
}

}  // namespace spinrs
