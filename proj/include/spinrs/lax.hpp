#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spinrs/integrate.hpp"
#include "spinrs/states.hpp"

namespace spinrs {

// with_sqrt_prefactor carries the uniform scalar 1/sqrt(sigma(z+eta) sigma(z-eta)),
// evaluated on the branch supplied alongside; stripped omits it, which keeps
// determinant work single-valued
enum class PrefactorPolicy { with_sqrt_prefactor, stripped };

std::string to_string(PrefactorPolicy p);

struct LaxSample {
    int n = 0;
    cplx z;
    std::vector<cplx> matrix;  // row-major
    BranchDatum branch;
    PrefactorPolicy policy = PrefactorPolicy::with_sqrt_prefactor;

    const cplx& at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * n + j]; }
};

// L_ij = f_i Phi(x_i - x_j - eta, z)
LaxSample lax_rs(const LatticeSpec& L, const RSState& s, cplx z, const BranchDatum& branch);

// L_ij = F_ij Phi(x_i - x_j - eta, z)
LaxSample lax_spin(const LatticeSpec& L, const SpinState& s, cplx z, const BranchDatum& branch);

// diagonally gauged two-particle matrix; branch is required (and used) only
// by the with_sqrt_prefactor policy
LaxSample lax_gauged_n2(const LatticeSpec& L, const N2SpinChart& c, cplx z, PrefactorPolicy policy,
                        std::optional<BranchDatum> branch = std::nullopt);

// f1 f2 sigma^2(z)/sigma^2(eta) - f3^2 sigma(z+D) sigma(z-D)/(sigma(D-eta) sigma(-D-eta)),
// D = x1 - x2; even in z, and exactly det(lax_gauged_n2 stripped)
cplx det_condition_n2(const LatticeSpec& L, const N2SpinChart& c, cplx z);

struct Z0Solution {
    cplx z0;
    double residual = 0.0;
    int newton_iterations = 0;
    cplx paired_root;
};

// Root of det_condition_n2 with Re(z0) >= 0 in the fundamental cell.  With no
// guess, continues the root from z = eta along f3^2(s) = (1-s) f1 f2 + s f3^2
// in 8 steps; Newton derivative by central difference (step 1e-7), residual
// tolerance 1e-10, at most 50 iterations per stage.
Z0Solution solve_z0(const LatticeSpec& L, const N2SpinChart& c, std::optional<cplx> guess = std::nullopt);

// the inverse chart move: f3^2 making z0 a root of the det condition
cplx f3_squared_from_z0(const LatticeSpec& L, const N2LeafState& s);
cplx f3_from_z0(const LatticeSpec& L, const N2LeafState& s);

// tr(L^k) for each requested order
std::vector<cplx> spectral_invariants(const LaxSample& sample, const std::vector<int>& orders);

std::pair<cplx, cplx> eigenvalues_2x2(const LaxSample& sample);

struct DriftReport {
    double max_drift = 0.0;
    int skipped_snapshots = 0;
    std::vector<double> per_time;
    std::vector<cplx> reference;  // invariants at the first snapshot
};

// max over snapshots and orders of |tr L^k(t) - tr L^k(0)| / |tr L^k(0)|,
// at fixed z and fixed branch; snapshots where the matrix hits a pole are
// skipped and counted
DriftReport isospectral_drift(const LatticeSpec& L, const Trajectory& traj, cplx eta, cplx z,
                              const BranchDatum& branch, const std::vector<int>& orders);

}  // namespace spinrs
