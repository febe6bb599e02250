#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinrs/states.hpp"

namespace spinrs {

// Sign of the amplitude evolution F_ij' in the matrix flow.  `printed` takes
// the right-hand side literally as stated; `flipped` negates it.  The two are
// discriminated empirically by sign_calibration in the verification suites.
enum class SignConvention { printed, flipped };

std::string to_string(SignConvention c);

// xddot_i = sum_{s != i} xdot_i xdot_s (V(x_s - x_i) - V(x_i - x_s))
std::vector<cplx> rs_accel(const LatticeSpec& L, cplx eta, const std::vector<cplx>& x, const std::vector<cplx>& xdot);

// F_ij' = sum_{k != j} F_ik F_kj V(x_j - x_k) - sum_{k != i} F_ik F_kj V(x_k - x_i),
// negated when conv == flipped; row-major like SpinState::F
std::vector<cplx> spin_rs_fdot(const LatticeSpec& L, cplx eta, SignConvention conv, int n, const std::vector<cplx>& x,
                               const std::vector<cplx>& F);

struct N2Rhs {
    cplx x1dot, x2dot, f1dot, f2dot;
};

// leaf flow: x_i' = f_i, f1' = -f1 f2 [zeta(D+z0)+zeta(D-z0)-2 zeta(D)], f2' = -f1',
// with D = x1 - x2
N2Rhs n2_flow_rhs(const LatticeSpec& L, const N2LeafState& s);

// thrown by the flat-system operators when two arguments of the elliptic
// kernel come within 1e-6 of a lattice point; integrate() converts it into
// an early-termination diagnostic instead of propagating
struct pole_proximity_error : std::runtime_error {
    explicit pole_proximity_error(const std::string& what) : std::runtime_error(what) {}
};

using FlatRhs = std::function<std::vector<cplx>(double t, const std::vector<cplx>& y)>;

// flat packing [x_0..x_{n-1}, v_0..v_{n-1}]
FlatRhs make_rs_system(const LatticeSpec& L, cplx eta, int n);
// flat packing [x_0..x_{n-1}, F row-major]
FlatRhs make_spin_system(const LatticeSpec& L, cplx eta, SignConvention conv, int n);
// flat packing [x1, x2, f1, f2]
FlatRhs make_n2_system(const LatticeSpec& L, cplx eta, cplx z0);

inline constexpr double kGuardSeparation = 1e-6;

}  // namespace spinrs
