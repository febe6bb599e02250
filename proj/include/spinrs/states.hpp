#pragma once

#include <vector>

#include "spinrs/elliptic.hpp"

namespace spinrs {

// positions + diagonal velocities f_i = xdot_i of the scalar flow
struct RSState {
    std::vector<cplx> x;
    std::vector<cplx> f;
    cplx eta{0.0, 0.0};
};

// positions + full N x N amplitude matrix, row-major; xdot_i = F(i,i)
struct SpinState {
    int n = 0;
    std::vector<cplx> x;
    std::vector<cplx> F;
    cplx eta{0.0, 0.0};

    cplx& at(int i, int j) { return F[static_cast<std::size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return F[static_cast<std::size_t>(i) * n + j]; }
};

// two-particle leaf chart (x1, x2, f1, f2) at fixed spectral parameter z0
struct N2LeafState {
    cplx x1, x2, f1, f2;
    cplx z0;
    cplx eta;
};

// two-particle chart in the original variables, f3 = sqrt(F12 F21)
struct N2SpinChart {
    cplx x1, x2, f1, f2, f3;
    cplx eta;
};

// extract the (x1, x2, f1, f2, f3) chart from a 2x2 amplitude state
N2SpinChart chart_from_spin(const SpinState& s);

struct MomentaResult {
    std::vector<cplx> f;
    // true when some radicand sat on the negative real axis within 1e-12,
    // i.e. the principal square root was evaluated on its cut
    bool branch_cut_crossing = false;
};

// f_i = exp(p_i) * prod_{s != i} sqrt(sigma(d+eta) sigma(d-eta) / sigma(d)^2),
// d = x_i - x_s, principal square root factor by factor.
MomentaResult momenta_to_f(const LatticeSpec& L, const std::vector<cplx>& x, const std::vector<cplx>& p, cplx eta);

cplx hamiltonian(const RSState& s);
cplx hamiltonian(const SpinState& s);

// rank-one amplitudes F(i,j) = b_i * a_j
SpinState rank_factor_embed(const LatticeSpec& L, const std::vector<cplx>& x, const std::vector<cplx>& a,
                            const std::vector<cplx>& b, cplx eta);

// largest relative 2x2 minor of F, zero for rank-one amplitude matrices
double max_minor_residual(const SpinState& s);

void require_collision_free(const LatticeSpec& L, const std::vector<cplx>& x, double min_separation);

}  // namespace spinrs
