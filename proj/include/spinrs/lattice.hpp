#pragma once

#include <complex>
#include <string>

namespace spinrs {

using cplx = std::complex<double>;

inline constexpr double kPoleTol = 1e-12;   // rejection radius around poles
inline constexpr double kNomeCap = 0.95;    // reject lattices with |q| above this

enum class LatticeMode { elliptic, trigonometric, rational };

// Period lattice 2*omega1 Z + 2*omega3 Z with the two degenerate limits.
// Evaluation data (tau, nome, eta constants) is computed once at construction;
// instances are immutable afterwards and safe to share across threads.
class LatticeSpec {
public:
    static LatticeSpec elliptic(cplx omega1, cplx omega3);
    static LatticeSpec trigonometric(cplx omega1);
    static LatticeSpec rational();
    // Real-trajectory preset: omega1 real positive, omega3 = i*omega3_imag.
    static LatticeSpec rectangular(double omega1, double omega3_imag);

    LatticeMode mode() const { return mode_; }
    cplx omega1() const { return w1_; }
    cplx omega3() const { return w3_; }
    cplx tau() const { return tau_; }
    cplx nome() const { return q_; }
    cplx eta1() const { return eta1_; }   // zeta(omega1)
    cplx eta3() const { return eta3_; }   // zeta(omega3)

    // z = z_red + 2*m*omega1 + 2*n*omega3 with z_red in the centered cell.
    struct Reduction {
        cplx z_red;
        long m = 0;
        long n = 0;
    };
    Reduction reduce(cplx z) const;

    // Distance from z to the nearest lattice point (0 itself in rational mode).
    double lattice_distance(cplx z) const;
    bool near_lattice(cplx z, double tol = kPoleTol) const;

    // theta1 and v-derivatives at v, nome q; terms are evaluated in fused
    // exponential form so no intermediate overflows for any |q| < kNomeCap.
    struct Theta1Block {
        cplx t0, t1, t2, t3;
    };
    Theta1Block theta1_block(cplx v, int max_order) const;

    std::string mode_name() const;

private:
    LatticeSpec() = default;
    void init_elliptic();

    LatticeMode mode_ = LatticeMode::rational;
    cplx w1_{0.0, 0.0};
    cplx w3_{0.0, 0.0};
    cplx tau_{0.0, 0.0};
    cplx q_{0.0, 0.0};
    cplx log_q_{0.0, 0.0};
    cplx eta1_{0.0, 0.0};
    cplx eta3_{0.0, 0.0};
    cplx theta1p0_{0.0, 0.0};
    cplx nu_{0.0, 0.0};   // pi/(2*omega1), trigonometric mode

    friend cplx sigma(const LatticeSpec&, cplx);
    friend cplx zeta(const LatticeSpec&, cplx);
    friend cplx wp(const LatticeSpec&, cplx);
};

// One chosen value w of log(sigma(z-eta)/sigma(z+eta)); shifting w by 2*pi*i
// moves phi to the neighboring sheet.  The reference cut joins z = eta and
// z = -eta; make_branch picks the principal logarithm.
struct BranchDatum {
    cplx w{0.0, 0.0};
    std::string cut_convention = "principal-log cut joining z=+eta and z=-eta";
};

}  // namespace spinrs
