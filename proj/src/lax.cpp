#include "spinrs/lax.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinrs {

std::string to_string(PrefactorPolicy p) {
    return p == PrefactorPolicy::with_sqrt_prefactor ? "with_sqrt_prefactor" : "stripped";
}

namespace {

void require_spectral_point(const LatticeSpec& L, cplx z, cplx eta) {
    if (L.near_lattice(z - eta) || L.near_lattice(z + eta))
        throw std::domain_error("spectral point within 1e-12 of z = +/-eta");
}

std::vector<cplx> mat_mul(int n, const std::vector<cplx>& A, const std::vector<cplx>& B) {
    std::vector<cplx> C(static_cast<std::size_t>(n) * n, cplx(0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = A[static_cast<std::size_t>(i) * n + k];
            for (int j = 0; j < n; ++j) C[static_cast<std::size_t>(i) * n + j] += aik * B[static_cast<std::size_t>(k) * n + j];
        }
    return C;
}

cplx mat_trace(int n, const std::vector<cplx>& A) {
    cplx t = 0.0;
    for (int i = 0; i < n; ++i) t += A[static_cast<std::size_t>(i) * n + i];
    return t;
}

}  // namespace

LaxSample lax_rs(const LatticeSpec& L, const RSState& s, cplx z, const BranchDatum& branch) {
    const int n = static_cast<int>(s.x.size());
    if (static_cast<int>(s.f.size()) != n) throw std::invalid_argument("lax_rs: x and f sizes differ");
    require_spectral_point(L, z, s.eta);
    LaxSample out;
    out.n = n;
    out.z = z;
    out.branch = branch;
    out.matrix.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.matrix[static_cast<std::size_t>(i) * n + j] = s.f[i] * phi(L, s.x[i] - s.x[j] - s.eta, z, s.eta, branch);
    return out;
}

LaxSample lax_spin(const LatticeSpec& L, const SpinState& s, cplx z, const BranchDatum& branch) {
    require_spectral_point(L, z, s.eta);
    LaxSample out;
    out.n = s.n;
    out.z = z;
    out.branch = branch;
    out.matrix.resize(static_cast<std::size_t>(s.n) * s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            out.matrix[static_cast<std::size_t>(i) * s.n + j] = s.at(i, j) * phi(L, s.x[i] - s.x[j] - s.eta, z, s.eta, branch);
    return out;
}

LaxSample lax_gauged_n2(const LatticeSpec& L, const N2SpinChart& c, cplx z, PrefactorPolicy policy,
                        std::optional<BranchDatum> branch) {
    require_spectral_point(L, z, c.eta);
    const cplx D = c.x1 - c.x2;
    for (cplx denom : {cplx(c.eta), D + c.eta, D - c.eta, z + c.x1 + c.eta, z + c.x2 + c.eta, cplx(c.x1), cplx(c.x2)})
        if (L.near_lattice(denom)) throw std::domain_error("gauged matrix entry within 1e-12 of a pole");

    const cplx s_z = sigma(L, z);
    const cplx diag_scale = -s_z / sigma(L, c.eta);
    const cplx off12 = c.f3 * sigma(L, z - D) * sigma(L, z + c.x1 + c.eta) * sigma(L, c.x2) /
                       (sigma(L, -D - c.eta) * sigma(L, z + c.x2 + c.eta) * sigma(L, c.x1));
    const cplx off21 = c.f3 * sigma(L, z + D) * sigma(L, z + c.x2 + c.eta) * sigma(L, c.x1) /
                       (sigma(L, D - c.eta) * sigma(L, z + c.x1 + c.eta) * sigma(L, c.x2));

    LaxSample out;
    out.n = 2;
    out.z = z;
    out.policy = policy;
    out.matrix = {c.f1 * diag_scale, off12, off21, c.f2 * diag_scale};

    if (policy == PrefactorPolicy::with_sqrt_prefactor) {
        if (!branch) throw std::invalid_argument("lax_gauged_n2: with_sqrt_prefactor requires a branch datum");
        out.branch = *branch;
        // 1/sqrt(sigma(z+eta) sigma(z-eta)) on the sheet where
        // exp(w) = sigma(z-eta)/sigma(z+eta): exp(-w/2)/sigma(z+eta)
        const cplx pref = std::exp(-branch->w * 0.5) / sigma(L, z + c.eta);
        for (auto& e : out.matrix) e *= pref;
    }
    return out;
}

cplx det_condition_n2(const LatticeSpec& L, const N2SpinChart& c, cplx z) {
    const cplx D = c.x1 - c.x2;
    for (cplx denom : {cplx(c.eta), D + c.eta, D - c.eta})
        if (L.near_lattice(denom)) throw std::domain_error("det condition within 1e-12 of a pole");
    const cplx se = sigma(L, c.eta);
    return c.f1 * c.f2 * sigma(L, z) * sigma(L, z) / (se * se) -
           c.f3 * c.f3 * sigma(L, z + D) * sigma(L, z - D) / (sigma(L, D - c.eta) * sigma(L, -D - c.eta));
}

namespace {

// magnitude of the two condition terms, used to judge residuals relative to
// the local scale: in the trigonometric strip both terms decay like a
// Gaussian in Im z, so an absolute tolerance would accept spurious "roots"
// far down the strip where the whole function underflows
double det_condition_scale(const LatticeSpec& L, const N2SpinChart& c, cplx z) {
    const cplx D = c.x1 - c.x2;
    const cplx se = sigma(L, c.eta);
    return std::abs(c.f1 * c.f2 * sigma(L, z) * sigma(L, z) / (se * se)) +
           std::abs(c.f3 * c.f3 * sigma(L, z + D) * sigma(L, z - D) / (sigma(L, D - c.eta) * sigma(L, -D - c.eta)));
}

// one Newton run at fixed chart; returns iterations via out-parameter
cplx newton_z0(const LatticeSpec& L, const N2SpinChart& c, cplx z, int& iters) {
    constexpr double h = 1e-7;
    cplx best = z;
    double best_rel = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) {
        if (std::abs(z.imag()) > 10.0) throw std::runtime_error("z0 search: iterate left the physical strip");
        const cplx g = det_condition_n2(L, c, z);
        ++iters;
        const double scale = det_condition_scale(L, c, z);
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::runtime_error("z0 search: condition terms degenerate");
        const double rel = std::abs(g) / scale;
        if (rel < best_rel) {
            best_rel = rel;
            best = z;
        }
        if (rel < 1e-12) {
            // two more steps drive the root itself to machine precision
            for (int extra = 0; extra < 2; ++extra) {
                const cplx gp = det_condition_n2(L, c, z);
                const cplx dgp = (det_condition_n2(L, c, z + h) - det_condition_n2(L, c, z - h)) / (2.0 * h);
                if (std::abs(dgp) == 0.0) break;
                z -= gp / dgp;
                ++iters;
                const double relp = std::abs(det_condition_n2(L, c, z)) / det_condition_scale(L, c, z);
                if (relp < best_rel) {
                    best_rel = relp;
                    best = z;
                }
            }
            return best;
        }
        const cplx dg = (det_condition_n2(L, c, z + h) - det_condition_n2(L, c, z - h)) / (2.0 * h);
        if (std::abs(dg) == 0.0) throw std::runtime_error("z0 search: vanishing derivative");
        z -= g / dg;
    }
    throw std::runtime_error("z0 search: no convergence within 50 iterations");
}

// homotopy in f3^2 from the f3^2 = f1 f2 chart, where the root sits at eta
cplx continue_root(const LatticeSpec& L, const N2SpinChart& c, int steps, int& iters) {
    cplx z = c.eta;
    const cplx target = c.f3 * c.f3, start = c.f1 * c.f2;
    for (int step = 1; step <= steps; ++step) {
        N2SpinChart cs = c;
        const double s = double(step) / steps;
        cs.f3 = std::sqrt((1.0 - s) * start + s * target);
        z = newton_z0(L, cs, z, iters);
    }
    return z;
}

}  // namespace

Z0Solution solve_z0(const LatticeSpec& L, const N2SpinChart& c, std::optional<cplx> guess) {
    Z0Solution sol;
    const cplx target = c.f3 * c.f3;
    auto round_trip_ok = [&](cplx z) {
        const N2LeafState leaf{c.x1, c.x2, c.f1, c.f2, z, c.eta};
        return std::abs(f3_squared_from_z0(L, leaf) - target) <= 1e-8 * std::max(std::abs(target), 1e-6);
    };

    cplx z;
    bool solved = false;
    if (guess) {
        try {
            z = newton_z0(L, c, *guess, sol.newton_iterations);
            solved = round_trip_ok(z);
        } catch (const std::runtime_error&) {
        }
    }
    if (!solved) {
        // refine the continuation path when the root excurses (it can pass
        // near the strip's point at infinity while f3^2 crosses the
        // degenerate value where the two condition terms share all zeros)
        for (int steps = 8; steps <= 512; steps *= 4) {
            try {
                z = continue_root(L, c, steps, sol.newton_iterations);
            } catch (const std::runtime_error&) {
                continue;
            }
            if ((solved = round_trip_ok(z))) break;
        }
    }
    if (!solved) throw std::runtime_error("z0 search: continuation failed to reach a valid root");

    cplx zr = L.reduce(z).z_red;
    if (zr.real() < -kPoleTol || (std::abs(zr.real()) <= kPoleTol && zr.imag() < 0.0)) zr = -zr;
    // re-polish at the reduced representative: the condition only vanishes
    // periodically up to a quasi-periodic scale factor
    zr = newton_z0(L, c, zr, sol.newton_iterations);
    if (L.near_lattice(zr)) throw std::runtime_error("z0 search: root collided with a lattice point");
    if (!round_trip_ok(zr)) throw std::runtime_error("z0 search: reduced root fails the chart round trip");
    sol.z0 = zr;
    sol.paired_root = -zr;
    sol.residual = std::abs(det_condition_n2(L, c, zr));
    return sol;
}

cplx f3_squared_from_z0(const LatticeSpec& L, const N2LeafState& s) {
    const cplx D = s.x1 - s.x2;
    if (L.near_lattice(s.z0 + D) || L.near_lattice(s.z0 - D))
        throw std::domain_error("f3 recovery degenerate: z0 within 1e-12 of +/-(x1-x2)");
    const cplx se = sigma(L, s.eta);
    return s.f1 * s.f2 * sigma(L, s.z0) * sigma(L, s.z0) / (se * se) * sigma(L, D - s.eta) * sigma(L, -D - s.eta) /
           (sigma(L, s.z0 + D) * sigma(L, s.z0 - D));
}

cplx f3_from_z0(const LatticeSpec& L, const N2LeafState& s) { return std::sqrt(f3_squared_from_z0(L, s)); }

std::vector<cplx> spectral_invariants(const LaxSample& sample, const std::vector<int>& orders) {
    int kmax = 0;
    for (int k : orders) {
        if (k < 1) throw std::invalid_argument("spectral_invariants: orders must be positive");
        kmax = std::max(kmax, k);
    }
    std::vector<cplx> out(orders.size());
    std::vector<cplx> power = sample.matrix;
    for (int k = 1; k <= kmax; ++k) {
        if (k > 1) power = mat_mul(sample.n, power, sample.matrix);
        for (std::size_t i = 0; i < orders.size(); ++i)
            if (orders[i] == k) out[i] = mat_trace(sample.n, power);
    }
    return out;
}

std::pair<cplx, cplx> eigenvalues_2x2(const LaxSample& sample) {
    if (sample.n != 2) throw std::invalid_argument("eigenvalues_2x2: matrix is not 2x2");
    const cplx tr = sample.matrix[0] + sample.matrix[3];
    const cplx det = sample.matrix[0] * sample.matrix[3] - sample.matrix[1] * sample.matrix[2];
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) * 0.5, (tr - disc) * 0.5};
}

DriftReport isospectral_drift(const LatticeSpec& L, const Trajectory& traj, cplx eta, cplx z,
                              const BranchDatum& branch, const std::vector<int>& orders) {
    if (traj.states.empty()) throw std::invalid_argument("isospectral_drift: empty trajectory");
    DriftReport rep;
    bool have_ref = false;
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const auto& y = traj.states[s];
        std::vector<cplx> inv;
        try {
            LaxSample sample;
            if (traj.layout == StateLayout::rs) {
                RSState st;
                st.x.assign(y.begin(), y.begin() + traj.n);
                st.f.assign(y.begin() + traj.n, y.end());
                st.eta = eta;
                sample = lax_rs(L, st, z, branch);
            } else if (traj.layout == StateLayout::spin) {
                SpinState st;
                st.n = traj.n;
                st.x.assign(y.begin(), y.begin() + traj.n);
                st.F.assign(y.begin() + traj.n, y.end());
                st.eta = eta;
                sample = lax_spin(L, st, z, branch);
            } else {
                throw std::invalid_argument("isospectral_drift: n2 leaf layout carries no Lax matrix");
            }
            inv = spectral_invariants(sample, orders);
        } catch (const std::domain_error&) {
            ++rep.skipped_snapshots;
            rep.per_time.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        if (!have_ref) {
            rep.reference = inv;
            have_ref = true;
            rep.per_time.push_back(0.0);
            continue;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < inv.size(); ++i)
            worst = std::max(worst, std::abs(inv[i] - rep.reference[i]) / std::abs(rep.reference[i]));
        rep.per_time.push_back(worst);
        rep.max_drift = std::max(rep.max_drift, worst);
    }
    if (!have_ref) throw std::runtime_error("isospectral_drift: every snapshot hit a pole");
    return rep;
}

}  // namespace spinrs
