#pragma once

#include "spinrs/lattice.hpp"

namespace spinrs {

// Weierstrass sigma; entire, odd, vanishing exactly at lattice points.
cplx sigma(const LatticeSpec& L, cplx z);

// Weierstrass zeta; odd, simple poles on the lattice (rejected within kPoleTol).
cplx zeta(const LatticeSpec& L, cplx z);

// Weierstrass p-function, wp = -zeta'.
cplx wp(const LatticeSpec& L, cplx z);

// V(x) = zeta(x + eta) - zeta(x)
cplx v_potential(const LatticeSpec& L, cplx x, cplx eta);

// V~(x) = zeta(x + z0) - zeta(x)
cplx v_tilde(const LatticeSpec& L, cplx x, cplx z0);

// zeta(x + c) + zeta(x - c) - 2 zeta(x); odd in x, even in c.
cplx zeta_bracket(const LatticeSpec& L, cplx x, cplx c);

// Principal-log branch datum for phi at spectral point z.
BranchDatum make_branch(const LatticeSpec& L, cplx z, cplx eta);

// phi(x, z) = sigma(z + x + eta) / (sigma(z + eta) sigma(x)) * exp(x w / (2 eta)),
// single-valued in x once the branch datum fixes w.
cplx phi(const LatticeSpec& L, cplx x, cplx z, cplx eta, const BranchDatum& branch);

// |s(a+c)s(a-c)s(b+d)s(b-d) - s(a+d)s(a-d)s(b+c)s(b-c) - s(a+b)s(a-b)s(c+d)s(c-d)|
double sigma_three_term_residual(const LatticeSpec& L, cplx a, cplx b, cplx c, cplx d);

// |zeta(a)+zeta(b)+zeta(c)-zeta(a+b+c) - s(a+b)s(b+c)s(a+c)/(s(a)s(b)s(c)s(a+b+c))|
double zeta_sigma_residual(const LatticeSpec& L, cplx a, cplx b, cplx c);

}  // namespace spinrs
