#include "spinrs/states.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrs {

void require_collision_free(const LatticeSpec& L, const std::vector<cplx>& x, double min_separation) {
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (L.lattice_distance(x[i] - x[j]) < min_separation)
                throw std::domain_error("particle collision: |x_i - x_j| below minimum separation");
}

MomentaResult momenta_to_f(const LatticeSpec& L, const std::vector<cplx>& x, const std::vector<cplx>& p, cplx eta) {
    if (x.size() != p.size()) throw std::invalid_argument("momenta_to_f: size mismatch between x and p");
    const int n = static_cast<int>(x.size());
    require_collision_free(L, x, 1e-10);

    MomentaResult out;
    out.f.resize(n);
    for (int i = 0; i < n; ++i) {
        cplx prod = std::exp(p[i]);
        for (int s = 0; s < n; ++s) {
            if (s == i) continue;
            const cplx d = x[i] - x[s];
            const cplx sd = sigma(L, d);
            const cplx r = sigma(L, d + eta) * sigma(L, d - eta) / (sd * sd);
            if (r.real() < 0.0 && std::abs(r.imag()) <= 1e-12 * std::abs(r)) out.branch_cut_crossing = true;
            prod *= std::sqrt(r);
        }
        out.f[i] = prod;
    }
    return out;
}

cplx hamiltonian(const RSState& s) {
    cplx h = 0.0;
    for (const cplx& fi : s.f) h += fi;
    return h;
}

cplx hamiltonian(const SpinState& s) {
    cplx h = 0.0;
    for (int i = 0; i < s.n; ++i) h += s.at(i, i);
    return h;
}

SpinState rank_factor_embed(const LatticeSpec& L, const std::vector<cplx>& x, const std::vector<cplx>& a,
                            const std::vector<cplx>& b, cplx eta) {
    if (x.size() != a.size() || x.size() != b.size())
        throw std::invalid_argument("rank_factor_embed: x, a, b must have equal length");
    require_collision_free(L, x, 1e-10);

    SpinState s;
    s.n = static_cast<int>(x.size());
    s.x = x;
    s.eta = eta;
    s.F.resize(static_cast<std::size_t>(s.n) * s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) s.at(i, j) = b[i] * a[j];
    return s;
}

N2SpinChart chart_from_spin(const SpinState& s) {
    if (s.n != 2) throw std::invalid_argument("chart_from_spin: requires a 2x2 amplitude state");
    return N2SpinChart{s.x[0], s.x[1], s.at(0, 0), s.at(1, 1), std::sqrt(s.at(0, 1) * s.at(1, 0)), s.eta};
}

double max_minor_residual(const SpinState& s) {
    double scale = 0.0;
    for (const cplx& v : s.F) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j)
            for (int k = 0; k < s.n; ++k)
                for (int l = k + 1; l < s.n; ++l) {
                    const cplx m = s.at(i, k) * s.at(j, l) - s.at(i, l) * s.at(j, k);
                    worst = std::max(worst, std::abs(m));
                }
    return worst / (scale * scale);
}

}  // namespace spinrs
