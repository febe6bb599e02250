#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "spinrs/lax.hpp"
#include "spinrs/rng.hpp"

using namespace spinrs;

namespace {

const LatticeSpec& square() {
    static const auto L = LatticeSpec::rectangular(1.0, 1.0);
    return L;
}

N2SpinChart sample_chart(Rng& rng, cplx eta) {
    N2SpinChart c;
    c.x2 = rng.box(0.1, 0.4, -0.05, 0.05);
    c.x1 = c.x2 + rng.box(0.2, 0.8, -0.05, 0.05);
    c.f1 = rng.box(0.5, 2.0, -0.2, 0.2);
    c.f2 = rng.box(0.5, 2.0, -0.2, 0.2);
    c.f3 = std::sqrt(rng.uniform(0.1, 0.9) * c.f1 * c.f2);
    c.eta = eta;
    return c;
}

}  // namespace

TEST_CASE("scalar Lax matrix composition") {
    const auto& L = square();
    const cplx eta(0.37), z(0.21, 0.13);
    const auto br = make_branch(L, z, eta);

    SUBCASE("single particle") {
        RSState s;
        s.x = {cplx(0.3, 0.1)};
        s.f = {cplx(1.7, -0.2)};
        s.eta = eta;
        auto sample = lax_rs(L, s, z, br);
        CHECK(sample.n == 1);
        CHECK(std::abs(sample.at(0, 0) - s.f[0] * phi(L, -eta, z, eta, br)) == 0.0);
    }

    SUBCASE("entries and constant diagonal ratio") {
        RSState s;
        s.x = {cplx(0.1, 0.02), cplx(0.55, -0.04), cplx(-0.3, 0.06)};
        s.f = {cplx(1.2, 0.3), cplx(0.8, -0.1), cplx(1.5, 0.0)};
        s.eta = eta;
        auto sample = lax_rs(L, s, z, br);
        const cplx diag_phi = phi(L, -eta, z, eta, br);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(sample.at(i, i) / s.f[i] - diag_phi) < 1e-13 * std::abs(diag_phi));
            for (int j = 0; j < 3; ++j) {
                const cplx want = s.f[i] * phi(L, s.x[i] - s.x[j] - eta, z, eta, br);
                CHECK(std::abs(sample.at(i, j) - want) < 1e-13 * std::max(1.0, std::abs(want)));
            }
        }
    }

    SUBCASE("spectral point at +/-eta is rejected") {
        RSState s;
        s.x = {cplx(0.1), cplx(0.6)};
        s.f = {cplx(1.0), cplx(1.0)};
        s.eta = eta;
        CHECK_THROWS_AS(lax_rs(L, s, eta, br), std::domain_error);
        CHECK_THROWS_AS(lax_rs(L, s, -eta, br), std::domain_error);
    }
}

TEST_CASE("matrix Lax: zero amplitudes, composition, rank-one conjugacy") {
    const auto& L = square();
    const cplx eta(0.37), z(0.19, 0.11);
    const auto br = make_branch(L, z, eta);
    const std::vector<cplx> xs = {cplx(0.05, 0.02), cplx(0.48, -0.03), cplx(-0.33, 0.01)};

    SUBCASE("zero amplitude matrix gives the zero sample") {
        SpinState s;
        s.n = 3;
        s.x = xs;
        s.F.assign(9, cplx(0.0));
        s.eta = eta;
        auto sample = lax_spin(L, s, z, br);
        for (const auto& e : sample.matrix) CHECK(e == cplx(0.0));
    }

    SUBCASE("two-particle entries against the kernel") {
        SpinState s;
        s.n = 2;
        s.x = {xs[0], xs[1]};
        s.F = {cplx(1.1, 0.1), cplx(0.7, -0.3), cplx(0.4, 0.2), cplx(0.9, 0.0)};
        s.eta = eta;
        auto sample = lax_spin(L, s, z, br);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const cplx want = s.at(i, j) * phi(L, s.x[i] - s.x[j] - eta, z, eta, br);
                CHECK(std::abs(sample.at(i, j) - want) < 1e-13 * std::max(1.0, std::abs(want)));
            }
    }

    SUBCASE("rank-one amplitudes share the scalar spectrum") {
        const std::vector<cplx> a = {cplx(1.1, 0.2), cplx(0.7, -0.1), cplx(1.4, 0.05)};
        const std::vector<cplx> b = {cplx(0.9, -0.3), cplx(1.2, 0.1), cplx(0.6, 0.4)};
        auto S = rank_factor_embed(L, xs, a, b, eta);
        RSState r;
        r.x = xs;
        r.eta = eta;
        for (int i = 0; i < 3; ++i) r.f.push_back(a[i] * b[i]);
        auto inv_spin = spectral_invariants(lax_spin(L, S, z, br), {1, 2, 3});
        auto inv_rs = spectral_invariants(lax_rs(L, r, z, br), {1, 2, 3});
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(inv_spin[k] - inv_rs[k]) < 1e-12 * std::abs(inv_rs[k]));
    }
}

TEST_CASE("gauged two-particle matrix") {
    const auto& L = square();
    const cplx eta(0.37);
    Rng rng(substream(77, 1));

    SUBCASE("stripped trace matches the ungauged trace across the gauge") {
        for (int trial = 0; trial < 20; ++trial) {
            auto c = sample_chart(rng, eta);
            const cplx z = rng.box(0.05, 0.45, 0.05, 0.45);
            const auto br = make_branch(L, z, eta);
            auto g = lax_gauged_n2(L, c, z, PrefactorPolicy::stripped);
            const cplx tr = g.at(0, 0) + g.at(1, 1);
            const cplx direct = -(c.f1 + c.f2) * sigma(L, z) / sigma(L, eta);
            CHECK(std::abs(tr - direct) < 1e-13 * std::abs(direct));
            // under the compatible square root the stripped trace equals the
            // ungauged (f1+f2) Phi(-eta, z) times sigma(z+eta) exp(w/2)
            const cplx lift = (c.f1 + c.f2) * phi(L, -eta, z, eta, br) * sigma(L, z + eta) * std::exp(br.w * 0.5);
            CHECK(std::abs(tr - lift) < 1e-10 * std::abs(tr));
        }
    }

    SUBCASE("f3 = 0 diagonalizes and the det condition factorizes") {
        auto c = sample_chart(rng, eta);
        c.f3 = cplx(0.0);
        const cplx z(0.23, 0.31);
        auto g = lax_gauged_n2(L, c, z, PrefactorPolicy::stripped);
        CHECK(g.at(0, 1) == cplx(0.0));
        CHECK(g.at(1, 0) == cplx(0.0));
        const cplx se = sigma(L, eta);
        const cplx want = c.f1 * c.f2 * sigma(L, z) * sigma(L, z) / (se * se);
        CHECK(std::abs(det_condition_n2(L, c, z) - want) < 1e-13 * std::abs(want));
        CHECK(std::abs(det_condition_n2(L, c, cplx(0.0))) == 0.0);
    }

    SUBCASE("determinant of the stripped matrix is the det condition") {
        for (int trial = 0; trial < 30; ++trial) {
            auto c = sample_chart(rng, eta);
            const cplx z = rng.box(-0.45, 0.45, 0.02, 0.45);
            auto g = lax_gauged_n2(L, c, z, PrefactorPolicy::stripped);
            const cplx det = g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0);
            const cplx cond = det_condition_n2(L, c, z);
            CHECK(std::abs(det - cond) < 1e-12 * std::max(1.0, std::abs(cond)));
        }
    }

    SUBCASE("gauge invariance of the two-particle spectrum") {
        for (int trial = 0; trial < 20; ++trial) {
            auto c = sample_chart(rng, eta);
            // generic asymmetric splitting F12 != F21 with F12 F21 = f3^2
            const cplx split = rng.box(0.5, 1.5, -0.3, 0.3);
            SpinState s;
            s.n = 2;
            s.x = {c.x1, c.x2};
            s.F = {c.f1, c.f3 * split, c.f3 / split, c.f2};
            s.eta = eta;
            const cplx z = rng.box(0.05, 0.45, 0.05, 0.45);
            const auto br = make_branch(L, z, eta);
            auto ev_spin = eigenvalues_2x2(lax_spin(L, s, z, br));
            auto ev_gauge = eigenvalues_2x2(lax_gauged_n2(L, c, z, PrefactorPolicy::with_sqrt_prefactor, br));
            const double direct = std::max(std::abs(ev_spin.first - ev_gauge.first),
                                           std::abs(ev_spin.second - ev_gauge.second));
            const double swapped = std::max(std::abs(ev_spin.first - ev_gauge.second),
                                            std::abs(ev_spin.second - ev_gauge.first));
            const double scale = std::max(std::abs(ev_spin.first), std::abs(ev_spin.second));
            CHECK(std::min(direct, swapped) < 1e-10 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("det condition: evenness and the spinless root") {
    const auto& L = square();
    const cplx eta(0.37);
    Rng rng(substream(77, 2));

    for (int trial = 0; trial < 20; ++trial) {
        auto c = sample_chart(rng, eta);
        const cplx z = rng.box(-0.45, 0.45, -0.45, 0.45);
        const cplx plus = det_condition_n2(L, c, z), minus = det_condition_n2(L, c, -z);
        CHECK(std::abs(plus - minus) < 1e-13 * std::max(1.0, std::abs(plus)));
    }

    auto c = sample_chart(rng, eta);
    c.f3 = std::sqrt(c.f1 * c.f2);
    CHECK(std::abs(det_condition_n2(L, c, eta)) < 1e-12 * std::abs(c.f1 * c.f2));
}

TEST_CASE("z0 chart: solver, pairing, inverse move") {
    const auto& L = square();
    const cplx eta(0.37);
    Rng rng(substream(77, 3));

    SUBCASE("spinless charts solve to eta") {
        for (int trial = 0; trial < 10; ++trial) {
            auto c = sample_chart(rng, eta);
            c.f3 = std::sqrt(c.f1 * c.f2);
            auto sol = solve_z0(L, c);
            CHECK(std::abs(sol.z0 - eta) < 1e-10);
            CHECK(sol.residual < 1e-10);
        }
    }

    SUBCASE("rational closed form") {
        const auto R = LatticeSpec::rational();
        N2SpinChart c{cplx(1.0), cplx(0.0), cplx(1.0), cplx(1.0), std::sqrt(cplx(0.5)), cplx(0.5)};
        // f1 f2 z^2/eta^2 = f3^2 (z^2 - D^2)/(eta^2 - D^2)  =>  z0 = 1/sqrt(7)
        auto sol = solve_z0(R, c);
        CHECK(std::abs(sol.z0 - 1.0 / std::sqrt(7.0)) < 1e-10);
        CHECK(std::abs(sol.paired_root + sol.z0) == 0.0);
        CHECK(std::abs(det_condition_n2(R, c, sol.paired_root)) < 1e-9);
    }

    SUBCASE("general closed form agreement in rational mode") {
        const auto R = LatticeSpec::rational();
        for (int trial = 0; trial < 10; ++trial) {
            auto c = sample_chart(rng, cplx(0.31));
            const cplx D = c.x1 - c.x2, f3sq = c.f3 * c.f3, e2 = c.eta * c.eta;
            const cplx z0sq = -f3sq * e2 * D * D / (c.f1 * c.f2 * (e2 - D * D) - f3sq * e2);
            auto sol = solve_z0(R, c);
            CHECK(std::abs(sol.z0 * sol.z0 - z0sq) < 1e-9 * std::abs(z0sq));
        }
    }

    SUBCASE("small f3 continues toward the double root at zero") {
        auto c = sample_chart(rng, eta);
        c.f3 = std::sqrt(1e-4 * c.f1 * c.f2);
        auto big = solve_z0(L, c);
        c.f3 = std::sqrt(1e-6 * c.f1 * c.f2);
        auto small = solve_z0(L, c);
        CHECK(std::abs(big.z0) < 0.05);
        CHECK(std::abs(small.z0) < std::abs(big.z0));
    }

    SUBCASE("generic elliptic roots: residual, half-cell, evenness, warm start") {
        for (int trial = 0; trial < 15; ++trial) {
            auto c = sample_chart(rng, eta);
            auto sol = solve_z0(L, c);
            CHECK(sol.residual < 1e-10);
            CHECK(sol.z0.real() > -1e-10);
            CHECK(std::abs(det_condition_n2(L, c, -sol.z0)) < 1e-9);
            auto warm = solve_z0(L, c, sol.z0 + cplx(0.01, 0.005));
            CHECK(std::abs(warm.z0 - sol.z0) < 1e-8);
        }
    }

    SUBCASE("inverse chart move round trips") {
        for (int trial = 0; trial < 15; ++trial) {
            auto c = sample_chart(rng, eta);
            auto sol = solve_z0(L, c);
            N2LeafState leaf{c.x1, c.x2, c.f1, c.f2, sol.z0, eta};
            const cplx f3sq = f3_squared_from_z0(L, leaf);
            CHECK(std::abs(f3sq - c.f3 * c.f3) < 1e-9 * std::abs(c.f3 * c.f3));
        }
        // the spinless leaf recovers f1 f2 exactly
        auto c = sample_chart(rng, eta);
        N2LeafState leaf{c.x1, c.x2, c.f1, c.f2, eta, eta};
        CHECK(std::abs(f3_squared_from_z0(L, leaf) - c.f1 * c.f2) < 1e-12 * std::abs(c.f1 * c.f2));
    }
}

TEST_CASE("spectral invariants: diagonal order, naive oracle, branch shift") {
    const auto& L = square();
    const cplx eta(0.37), z(0.17, 0.23);
    const auto br = make_branch(L, z, eta);
    SpinState s;
    s.n = 2;
    s.x = {cplx(0.6, 0.02), cplx(0.1, -0.04)};
    s.F = {cplx(1.3, 0.2), cplx(0.6, -0.1), cplx(0.8, 0.3), cplx(0.9, -0.2)};
    s.eta = eta;
    auto sample = lax_spin(L, s, z, br);

    SUBCASE("order one is the amplitude trace times the diagonal kernel") {
        auto inv = spectral_invariants(sample, {1});
        const cplx want = phi(L, -eta, z, eta, br) * (s.at(0, 0) + s.at(1, 1));
        CHECK(std::abs(inv[0] - want) < 1e-13 * std::abs(want));
    }

    SUBCASE("order two against explicit multiplication") {
        auto inv = spectral_invariants(sample, {2});
        const cplx want = sample.at(0, 0) * sample.at(0, 0) + 2.0 * sample.at(0, 1) * sample.at(1, 0) +
                          sample.at(1, 1) * sample.at(1, 1);
        CHECK(std::abs(inv[0] - want) < 1e-13 * std::abs(want));
    }

    SUBCASE("branch sheet shift scales tr L^k by exp(-k pi i)") {
        BranchDatum shifted = br;
        shifted.w += cplx(0.0, 2.0 * std::acos(-1.0));
        auto sample2 = lax_spin(L, s, z, shifted);
        auto inv1 = spectral_invariants(sample, {1, 2, 3});
        auto inv2 = spectral_invariants(sample2, {1, 2, 3});
        for (int k = 1; k <= 3; ++k) {
            const cplx factor = std::exp(cplx(0.0, -k * std::acos(-1.0)));
            CHECK(std::abs(inv2[k - 1] - factor * inv1[k - 1]) < 1e-10 * std::abs(inv1[k - 1]));
        }
    }
}

TEST_CASE("isospectral drift along the matrix flow discriminates the sign") {
    const auto& L = square();
    const cplx eta(0.37);
    // rank-one two-particle data, moderate amplitudes
    const std::vector<cplx> xs = {cplx(0.55, 0.02), cplx(0.1, -0.01)};
    const std::vector<cplx> a = {cplx(0.5, 0.1), cplx(0.45, -0.05)};
    const std::vector<cplx> b = {cplx(0.4, -0.08), cplx(0.5, 0.06)};
    auto S = rank_factor_embed(L, xs, a, b, eta);
    std::vector<cplx> y0 = xs;
    y0.insert(y0.end(), S.F.begin(), S.F.end());

    const cplx z(0.21, 0.13);
    const auto br = make_branch(L, z, eta);

    SUBCASE("constant trajectory has zero drift") {
        Trajectory still;
        still.layout = StateLayout::spin;
        still.n = 2;
        still.times = {0.0, 1.0, 2.0};
        still.states = {y0, y0, y0};
        auto rep = isospectral_drift(L, still, eta, z, br, {1, 2});
        CHECK(rep.max_drift == 0.0);
        CHECK(rep.skipped_snapshots == 0);
    }

    double drift_by_conv[2] = {0.0, 0.0};
    for (auto conv : {SignConvention::printed, SignConvention::flipped}) {
        auto sys = make_spin_system(L, eta, conv, 2);
        auto tr = integrate(sys, y0, 0.0, 3.0, 1e-12, 1e-14, linspace(0.0, 3.0, 12), StateLayout::spin, 2);
        REQUIRE_FALSE(tr.stats.terminated_early);
        auto rep = isospectral_drift(L, tr, eta, z, br, {1, 2});
        drift_by_conv[conv == SignConvention::printed ? 0 : 1] = rep.max_drift;
    }
    // exactly one sign of the amplitude equation preserves the spectrum
    const double calibrated = std::min(drift_by_conv[0], drift_by_conv[1]);
    const double rejected = std::max(drift_by_conv[0], drift_by_conv[1]);
    CHECK(calibrated < 1e-8);
    CHECK(rejected > 1e-3);
    MESSAGE("printed drift = ", drift_by_conv[0], ", flipped drift = ", drift_by_conv[1]);
}
