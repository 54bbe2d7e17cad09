#include <gtest/gtest.h>

#include "dqap/lattice.hpp"
#include "support/oracles.hpp"

using namespace dqap;
using dqap::testing::random_orthonormal;

TEST(Slater, SelfOverlapIsOne) {
    std::mt19937_64 rng(1);
    const auto s = random_orthonormal(8, 3, rng);
    EXPECT_NEAR(std::abs(overlap(s, s) - 1.0), 0.0, 1e-13);
}

TEST(Slater, ColumnSwapFlipsOverlap) {
    std::mt19937_64 rng(2);
    const auto a = random_orthonormal(6, 3, rng);
    auto b = random_orthonormal(6, 3, rng);
    const cplx before = overlap(a, b);
    b.orbitals.col(0).swap(b.orbitals.col(2));
    EXPECT_NEAR(std::abs(overlap(a, b) + before), 0.0, 1e-13);
}

TEST(Slater, OverlapWithGroundStateMatchesFock) {
    const auto spec = LatticeSpec::half_filled(8, -1);
    const auto psi = initial_state(spec);
    const auto gs = exact_ground_state(spec).state;
    const cplx f = fock_inner(slater_to_fock(psi), slater_to_fock(gs));
    EXPECT_NEAR(std::norm(overlap(psi, gs)), std::norm(f), 1e-12);
}

TEST(Slater, TransitionDensityTraceAndBondingStructure) {
    const auto spec = LatticeSpec::half_filled(8, -1);
    const auto gs = exact_ground_state(spec).state;
    EXPECT_NEAR(std::abs(transition_density(gs, gs).trace() - 4.0), 0.0, 1e-12);
    const auto psi = initial_state(spec);
    const CMatrix G = transition_density(psi, psi);
    EXPECT_NEAR(std::abs(G(0, 0) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(G(1, 1) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(G(0, 1) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(G(0, 2)), 0.0, 1e-15);
}

TEST(Slater, TransitionDensityMatchesFock) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_orthonormal(6, 3, rng), b = random_orthonormal(6, 3, rng);
        const auto fa = slater_to_fock(a), fb = slater_to_fock(b);
        const CMatrix G = transition_density(a, b);
        const cplx norm = fock_inner(fa, fb);
        for (int x = 0; x < 6; ++x)
            for (int xp = 0; xp < 6; ++xp)
                EXPECT_NEAR(std::abs(G(xp, x) - fock_one_body(fa, fb, x, xp) / norm), 0.0, 1e-10);
    }
}

TEST(Slater, TwoBodyPauliAndDensityDensity) {
    std::mt19937_64 rng(4);
    const auto a = random_orthonormal(6, 3, rng);
    EXPECT_NEAR(std::abs(two_body_expectation(a, a, 2, 2, 4, 4)), 0.0, 1e-14);
    const auto psi = initial_state(LatticeSpec::half_filled(4, -1));
    EXPECT_NEAR(std::real(two_body_expectation(psi, psi, 0, 2, 2, 0)), 0.25, 1e-14);
}

TEST(Slater, TwoBodyMatchesFock) {
    std::mt19937_64 rng(5);
    const auto a = random_orthonormal(6, 3, rng), b = random_orthonormal(6, 3, rng);
    const auto fa = slater_to_fock(a), fb = slater_to_fock(b);
    const cplx norm = fock_inner(fa, fb);
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            for (int yp = 0; yp < 6; yp += 2)
                for (int xp = 1; xp < 6; xp += 2)
                    EXPECT_NEAR(std::abs(two_body_expectation(a, b, x, y, yp, xp) -
                                         fock_two_body(fa, fb, x, y, yp, xp) / norm),
                                0.0, 1e-10);
}

TEST(Slater, ZeroAngleIsIdentityAndRealLayersUnitary) {
    const auto spec = LatticeSpec::half_filled(10, 1);
    std::mt19937_64 rng(6);
    const auto a = random_orthonormal(10, 5, rng);
    for (auto b : {Bond::V1, Bond::V2}) {
        EXPECT_LT((apply_bond_layer(a, b, 0.0, TimeMode::Real, spec).orbitals - a.orbitals).norm(), 1e-15);
        const auto r = apply_bond_layer(a, b, 0.731, TimeMode::Real, spec);
        EXPECT_LT((r.gram() - CMatrix::Identity(5, 5)).norm(), 1e-12);
        EXPECT_TRUE(r.normalized);
        EXPECT_FALSE(apply_bond_layer(a, b, 0.3, TimeMode::Imaginary, spec).normalized);
    }
}

TEST(Slater, LayerSequenceMatchesFockEvolution) {
    for (int gamma : {1, -1}) {
        const auto spec = LatticeSpec::half_filled(6, gamma);
        const CMatrix v1 = build_v1(spec), v2 = build_v2(spec);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto mode : {TimeMode::Real, TimeMode::Imaginary}) {
            SlaterState s = random_orthonormal(6, 3, rng);
            FockVector f = slater_to_fock(s);
            for (int k = 0; k < 4; ++k) {
                const Bond b = k % 2 == 0 ? Bond::V2 : Bond::V1;
                const double a = u(rng);
                s = apply_bond_layer(s, b, a, mode, spec);
                const cplx z = mode == TimeMode::Real ? cplx(0.0, a) : cplx(a, 0.0);
                f = fock_evolve(f, b == Bond::V1 ? v1 : v2, z);
            }
            const FockVector g = slater_to_fock(s);
            EXPECT_NEAR(std::abs(dqap::testing::fock_normalized_overlap(g, f)), 1.0, 1e-10);
            // unnormalized amplitude, not only the ray
            EXPECT_LT(dqap::testing::phase_distance(g.amp, f.amp), 1e-10 * f.amp.norm());
        }
    }
}

TEST(Slater, EnergyExpectation) {
    const auto spec = LatticeSpec::half_filled(8, -1);
    const CMatrix h = build_hamiltonian(spec);
    EXPECT_NEAR(energy_expectation(initial_state(spec), h), -4.0, 1e-13);
    const auto gs = exact_ground_state(spec);
    EXPECT_NEAR(energy_expectation(gs.state, h), gs.energy, 1e-12);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i)
        EXPECT_GE(energy_expectation(random_orthonormal(8, 4, rng), h), gs.energy - 1e-10);
}

TEST(Slater, RescalingKeepsState) {
    const auto spec = LatticeSpec::half_filled(8, 1);
    SlaterState s = initial_state(spec);
    for (int k = 0; k < 6; ++k)
        s = apply_bond_layer(s, k % 2 ? Bond::V1 : Bond::V2, 0.5, TimeMode::Imaginary, spec);
    SlaterState r = s;
    rescale_columns(r);
    EXPECT_NEAR(std::abs(overlap(r, r) / overlap(s, s) - 1.0), 0.0, 1e-12);
    EXPECT_LT((occupied_projector(r) - occupied_projector(s)).norm(), 1e-12);
    EXPECT_NEAR(energy_expectation(r, build_hamiltonian(spec)),
                energy_expectation(s, build_hamiltonian(spec)), 1e-12);
}

TEST(Slater, OrthogonalStatesRejected) {
    const auto psi = initial_state(LatticeSpec::half_filled(4, -1));
    SlaterState other(CMatrix::Zero(4, 2));
    other.orbitals(0, 0) = 1.0 / std::sqrt(2.0);
    other.orbitals(1, 0) = -1.0 / std::sqrt(2.0);
    other.orbitals(2, 1) = 1.0;
    EXPECT_THROW(transition_density(psi, other), SingularOverlapError);
}
