#include <gtest/gtest.h>

#include "dqap/entanglement.hpp"
#include "dqap/optimizer.hpp"
#include "support/oracles.hpp"

using namespace dqap;

TEST(Entanglement, SingleSiteHalfFilling) {
    const auto gs = exact_ground_state(LatticeSpec::half_filled(12, -1)).state;
    const CMatrix D = one_particle_dm(gs, {3});
    EXPECT_NEAR(std::abs(D(0, 0) - 0.5), 0.0, 1e-12);
    EXPECT_NEAR(entanglement_entropy(gs, {3}), std::log(2.0), 1e-12);
}

TEST(Entanglement, WholeSystemIsIdempotent) {
    const auto gs = exact_ground_state(LatticeSpec::half_filled(10, 1)).state;
    const CMatrix D = one_particle_dm(gs, contiguous_block(0, 10));
    EXPECT_LT((D * D - D).norm(), 1e-10);
}

TEST(Entanglement, MatchesFockOracle) {
    const auto gs = exact_ground_state(LatticeSpec::half_filled(8, -1)).state;
    const FockVector f = slater_to_fock(gs);
    const Subsystem A = {0, 1, 2, 3};
    const CMatrix D = one_particle_dm(gs, A);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) EXPECT_NEAR(std::abs(D(a, b) - fock_one_body(f, f, A[a], A[b])), 0.0, 1e-12);
    EXPECT_NEAR(entanglement_entropy(gs, A), fock_entropy(f, A), 1e-10);
}

TEST(Entanglement, ProductStateBondPreservingCut) {
    const auto psi = initial_state(LatticeSpec::half_filled(12, -1));
    EXPECT_NEAR(entanglement_entropy(psi, contiguous_block(4, 6)), 0.0, 1e-12);
    EXPECT_NEAR(entanglement_entropy(psi, contiguous_block(3, 6)), 2.0 * std::log(2.0), 1e-12);
    EXPECT_TRUE(is_bond_preserving(contiguous_block(4, 6), 12));
    EXPECT_FALSE(is_bond_preserving(contiguous_block(3, 6), 12));
}

TEST(Entanglement, EntanglementHamiltonianRoute) {
    const auto gs = exact_ground_state(LatticeSpec::half_filled(20, -1)).state;
    const RVector d = correlation_spectrum(gs, contiguous_block(0, 10));
    EXPECT_NEAR(entropy_via_entanglement_hamiltonian(d), entropy_from_spectrum(d), 1e-9);
}

TEST(Entanglement, TwoSiteMutualInformation) {
    EXPECT_NEAR(mutual_information_2site(0.5, 0.5, 0.5), 2.0 * std::log(2.0), 1e-12);
    EXPECT_NEAR(mutual_information_2site(0.5, 0.5, 0.0), 0.0, 1e-14);
    const auto gs = exact_ground_state(LatticeSpec::half_filled(10, 1)).state;
    const CMatrix P = occupied_projector(gs);
    for (int x : {0, 3})
        for (int xp : {1, 4, 7}) {
            const double direct = entanglement_entropy(gs, {x}) + entanglement_entropy(gs, {xp}) -
                                  entanglement_entropy(gs, {x, xp});
            EXPECT_NEAR(mutual_information(gs, x, xp), direct, 1e-12);
            EXPECT_NEAR(mutual_information_2site(P(x, x).real(), P(xp, xp).real(), P(xp, x)),
                        direct, 1e-12);
        }
}

TEST(Entanglement, MutualInformationVanishesOutsideCone) {
    const auto spec = LatticeSpec::half_filled(40, -1);
    const auto st = build_dqap_state(spec, optimize(spec, 2, OptimizerConfig{}).params);
    for (int x = 0; x < 40; ++x)
        for (int xp = x + 1; xp < 40; ++xp) {
            const int d = std::min(xp - x, 40 - (xp - x));
            if (d > 9) {
                EXPECT_LE(mutual_information(st, x, xp), 1e-12);
            }
        }
}

TEST(Entanglement, BoundaryRankDiagnostics) {
    const auto spec = LatticeSpec::half_filled(40, -1);
    OptimizerConfig c;
    c.param_tol = 1e-10;
    const auto five = optimize(spec, 5, c);
    const auto d5 = boundary_rank_diagnostic(build_dqap_state(spec, five.params), contiguous_block(0, 20));
    EXPECT_EQ(d5.rank, 20);
    EXPECT_TRUE(d5.pairwise_degenerate);
    const auto six = optimize(spec, 6, c);
    const auto d6 = boundary_rank_diagnostic(build_dqap_state(spec, six.params), contiguous_block(0, 20));
    EXPECT_FALSE(d6.pairwise_degenerate);
}

TEST(Entanglement, ProductStateDiagnostic) {
    const auto psi = initial_state(LatticeSpec::half_filled(16, -1));
    const auto d = boundary_rank_diagnostic(psi, contiguous_block(0, 8));
    EXPECT_EQ(d.rank, 0);
    EXPECT_EQ(d.n_zero, 4);
    EXPECT_EQ(d.n_one, 4);
}

TEST(Entanglement, SyntheticExponents) {
    std::vector<double> S, deps;
    for (int M = 3; M <= 9; ++M) {
        S.push_back(std::log(M) / 3.0 + 0.7);
        deps.push_back(0.2 / (M * M));
    }
    for (double v : entropy_exponents(3, S)) EXPECT_NEAR(v, 1.0, 1e-12);
    for (double v : energy_exponents(3, deps)) EXPECT_NEAR(v, 1.0, 1e-12);
    const auto all = scaling_exponents(3, S, deps);
    EXPECT_EQ(all.M.front(), 3);
    EXPECT_EQ(all.M.size(), 6u);
    EXPECT_THROW(energy_exponents(1, {0.1, -0.1}), InvalidSpec);
}

TEST(Entanglement, InvalidInput) {
    const auto gs = exact_ground_state(LatticeSpec::half_filled(8, -1)).state;
    EXPECT_THROW(one_particle_dm(gs, {0, 0}), InvalidSpec);
    EXPECT_THROW(one_particle_dm(gs, {9}), InvalidSpec);
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 0) = 2.0;
    EXPECT_THROW(correlation_spectrum(bad), SpectrumError);
}
