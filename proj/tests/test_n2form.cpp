#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "spinrs/n2form.hpp"
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

N2LeafState solved_leaf(const LatticeSpec& L, const N2SpinChart& c) {
    auto sol = solve_z0(L, c);
    return N2LeafState{c.x1, c.x2, c.f1, c.f2, sol.z0, c.eta};
}

}  // namespace

TEST_CASE("leaf two-form structure") {
    const auto& L = square();
    const cplx eta(0.37);
    Rng rng(substream(99, 1));

    SUBCASE("canonical stub") {
        auto f = canonical_two_form();
        CHECK(std::abs(f.det() - cplx(1.0)) < 1e-15);
        N2LeafState s{cplx(0.6), cplx(0.1), cplx(1.2), cplx(0.8), eta, eta};
        auto r = symplectic_flow(f, s);
        CHECK(std::abs(r.x1dot - s.f1) < 1e-15);
        CHECK(std::abs(r.x2dot - s.f2) < 1e-15);
        CHECK(std::abs(r.f1dot) < 1e-15);
        CHECK(std::abs(r.f2dot) < 1e-15);
    }

    SUBCASE("antisymmetry, unit determinant, closedness") {
        for (int trial = 0; trial < 10; ++trial) {
            auto leaf = solved_leaf(L, sample_chart(rng, eta));
            for (auto conv : {WConvention::odd_combination, WConvention::two_v_tilde}) {
                auto f = two_form_n2(L, leaf, conv);
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) CHECK(f.at(a, b) == -f.at(b, a));
                CHECK(std::abs(f.det() - cplx(1.0)) < 1e-12);
                CHECK(closedness_residual(L, leaf, conv) < 1e-8);
            }
        }
    }

    SUBCASE("the two conventions differ off the symmetric locus") {
        auto leaf = solved_leaf(L, sample_chart(rng, eta));
        auto odd = two_form_n2(L, leaf, WConvention::odd_combination);
        auto twov = two_form_n2(L, leaf, WConvention::two_v_tilde);
        CHECK(std::abs(odd.w_value - twov.w_value) > 1e-6);
        // odd combination is even in z0, so it is blind to the root pairing
        N2LeafState flipped = leaf;
        flipped.z0 = -leaf.z0;
        auto odd2 = two_form_n2(L, flipped, WConvention::odd_combination);
        CHECK(std::abs(odd.w_value - odd2.w_value) < 1e-12 * std::max(1.0, std::abs(odd.w_value)));
    }

    SUBCASE("z0 = eta reduces W to the antisymmetrized potential") {
        auto c = sample_chart(rng, eta);
        N2LeafState leaf{c.x1, c.x2, c.f1, c.f2, eta, eta};
        auto f = two_form_n2(L, leaf, WConvention::odd_combination);
        const cplx D = c.x1 - c.x2;
        const cplx want = v_potential(L, D, eta) - v_potential(L, -D, eta);
        CHECK(std::abs(f.w_value - want) < 1e-12 * std::abs(want));
    }
}

TEST_CASE("symplectic flow reproduces the leaf flow pointwise") {
    const auto& L = square();
    const cplx eta(0.37);
    Rng rng(substream(99, 2));
    for (int trial = 0; trial < 100; ++trial) {
        auto leaf = solved_leaf(L, sample_chart(rng, eta));
        const auto direct = n2_flow_rhs(L, leaf);
        const auto form = two_form_n2(L, leaf, WConvention::odd_combination);
        const auto via = symplectic_flow(form, leaf);
        const double scale = std::max({1.0, std::abs(direct.f1dot)});
        CHECK(std::abs(via.x1dot - direct.x1dot) < 1e-12 * scale);
        CHECK(std::abs(via.x2dot - direct.x2dot) < 1e-12 * scale);
        CHECK(std::abs(via.f1dot - direct.f1dot) < 1e-12 * scale);
        CHECK(std::abs(via.f2dot - direct.f2dot) < 1e-12 * scale);
        // the energy differential annihilates its own field
        CHECK(std::abs(via.f1dot + via.f2dot) < 1e-13 * scale);
    }
}

TEST_CASE("key identity linking the two det-condition roots") {
    const cplx eta(0.37);
    Rng rng(substream(99, 3));

    SUBCASE("generic states on all three backends") {
        for (const auto& L :
             {LatticeSpec::rectangular(1.0, 1.0), LatticeSpec::trigonometric(1.0), LatticeSpec::rational()}) {
            for (int trial = 0; trial < 50; ++trial) {
                auto c = sample_chart(rng, eta);
                auto sol = solve_z0(L, c);
                CHECK(identity8_residual(L, c, sol.z0) < 1e-9);
            }
        }
    }

    SUBCASE("spinless states make both sides identical") {
        const auto& L = square();
        auto c = sample_chart(rng, eta);
        c.f3 = std::sqrt(c.f1 * c.f2);
        CHECK(identity8_residual(L, c, eta) < 1e-14);
    }

    SUBCASE("swapping particles leaves the residual unchanged") {
        const auto& L = square();
        auto c = sample_chart(rng, eta);
        auto sol = solve_z0(L, c);
        N2SpinChart swapped{c.x2, c.x1, c.f2, c.f1, c.f3, c.eta};
        const double r1 = identity8_residual(L, c, sol.z0);
        const double r2 = identity8_residual(L, swapped, sol.z0);
        CHECK(std::abs(r1 - r2) < 1e-9);
    }
}

TEST_CASE("flow equivalence across the three descriptions") {
    const auto& L = square();
    const cplx eta(0.37);
    Rng rng(substream(99, 4));

    SUBCASE("generic leaf") {
        auto leaf = solved_leaf(L, sample_chart(rng, eta));
        auto rep = flow_equivalence_test(L, leaf, 5.0, 1e-6);
        CAPTURE(rep.provenance);
        CHECK(rep.pass);
        CHECK(rep.max_residual < 1e-6);
    }

    SUBCASE("spinless leaf picks up the second-order reference") {
        auto c = sample_chart(rng, eta);
        N2LeafState leaf{c.x1, c.x2, c.f1, c.f2, eta, eta};
        auto rep = flow_equivalence_test(L, leaf, 3.0, 1e-6);
        CAPTURE(rep.provenance);
        CHECK(rep.pass);
        CHECK(rep.provenance.find("second-order reference included") != std::string::npos);
    }

    SUBCASE("the proof's second-order system holds along the leaf flow") {
        // xddot_1 = d f1/dt must equal -f1 f2 G and xddot_1 + xddot_2 = 0
        auto leaf = solved_leaf(L, sample_chart(rng, eta));
        auto sys = make_n2_system(L, eta, leaf.z0);
        auto tr = integrate(sys, {leaf.x1, leaf.x2, leaf.f1, leaf.f2}, 0.0, 2.0, 1e-12, 1e-14,
                            linspace(0.0, 2.0, 9), StateLayout::n2, 2);
        REQUIRE_FALSE(tr.stats.terminated_early);
        for (const auto& y : tr.states) {
            N2LeafState cur{y[0], y[1], y[2], y[3], leaf.z0, eta};
            auto r = n2_flow_rhs(L, cur);
            CHECK(std::abs(r.f1dot + r.f2dot) < 1e-12);
            // recover f3^2 through the inverse chart and check the eta-side bracket
            const cplx f3sq = f3_squared_from_z0(L, cur);
            const cplx D = y[0] - y[1];
            const cplx want = -f3sq * (zeta_bracket(L, D, eta));
            CHECK(std::abs(r.f1dot - want) < 1e-8 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("sign calibration selects one convention") {
    const cplx eta(0.37);

    SUBCASE("generic elliptic and rational runs agree") {
        for (const auto& L : {LatticeSpec::rectangular(1.0, 1.0), LatticeSpec::rational()}) {
            SpinState s;
            s.n = 2;
            s.x = {cplx(0.55, 0.02), cplx(0.1, -0.01)};
            s.F = {cplx(0.2, 0.02), cplx(0.21, -0.03), cplx(0.18, 0.02), cplx(0.25, 0.01)};
            s.eta = eta;
            auto rep = sign_calibration(L, s, 3.0);
            CAPTURE(rep.provenance);
            CHECK(rep.pass);
            CHECK(rep.convention == "flipped");
        }
        CHECK(calibrated_convention() == SignConvention::flipped);
    }

    SUBCASE("diagonal amplitudes are rejected as sign-blind") {
        SpinState s;
        s.n = 2;
        s.x = {cplx(0.5), cplx(0.1)};
        s.F = {cplx(0.3), cplx(0.0), cplx(0.0), cplx(0.4)};
        s.eta = eta;
        CHECK_THROWS_AS(sign_calibration(square(), s, 2.0), std::invalid_argument);
    }
}

TEST_CASE("spinless limit in both directions with form comparison") {
    const cplx eta(0.37);
    Rng rng(substream(99, 5));
    for (const auto& L : {LatticeSpec::rectangular(1.0, 1.0), LatticeSpec::rational()}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto c = sample_chart(rng, eta);
            auto rep = spinless_limit_test(L, c.x1, c.x2, c.f1, c.f2, eta);
            CAPTURE(rep.provenance);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("general-N spinless form flow") {
    Rng rng(substream(99, 6));

    SUBCASE("two particles, rational backend") {
        RSState s;
        s.x = {cplx(1.0, 0.05), cplx(0.0, -0.02)};
        s.f = {cplx(0.4, 0.03), cplx(0.3, -0.02)};
        s.eta = cplx(0.31);
        auto rep = general_n_spinless_form_check(LatticeSpec::rational(), s, 3.0, 1e-8);
        CAPTURE(rep.provenance);
        CHECK(rep.pass);
        CHECK(rep.convention == "negated");
    }

    SUBCASE("three particles, elliptic backend") {
        RSState s;
        s.x = {cplx(0.1, 0.0), cplx(0.45, 0.08), cplx(0.85, -0.03)};
        s.f = {cplx(0.25, 0.02), cplx(-0.1, 0.05), cplx(0.2, -0.04)};
        s.eta = cplx(0.37);
        auto rep = general_n_spinless_form_check(square(), s, 2.0, 1e-6);
        CAPTURE(rep.provenance);
        CHECK(rep.pass);
        CHECK(rep.convention == "negated");
    }

    SUBCASE("eta = 0 gives exact free motion") {
        RSState s;
        s.x = {cplx(1.0), cplx(0.0)};
        s.f = {cplx(0.5), cplx(-0.25)};
        s.eta = cplx(0.0);
        auto rep = general_n_spinless_form_check(LatticeSpec::rational(), s, 2.0, 1e-10);
        CAPTURE(rep.provenance);
        CHECK(rep.pass);
    }
}

TEST_CASE("rational-limit gauge rescaling") {
    Rng rng(substream(99, 7));
    const auto R = LatticeSpec::rational();
    auto c = sample_chart(rng, cplx(0.31));
    auto sol = solve_z0(R, c);
    N2LeafState leaf{c.x1, c.x2, c.f1, c.f2, sol.z0, cplx(0.31)};
    auto rep = rational_limit_check(leaf);
    CAPTURE(rep.provenance);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-10);
}
