#pragma once

#include <vector>

#include "dqap/slater.hpp"

namespace dqap {

// 0-based site list
using Subsystem = std::vector<int>;

Subsystem contiguous_block(int first, int length);
void validate_subsystem(const Subsystem &A, int L);
// block boundaries fall between sites 2k-1 and 2k (0-based), so no bonding pair is cut
bool is_bond_preserving(const Subsystem &A, int L);

// D[a, b] = <c^dag_{A[a]} c_{A[b]}>
CMatrix one_particle_dm(const SlaterState &state, const Subsystem &A);

// eigenvalues of D_A, ascending; SpectrumError if any leaves [0, 1] by more than 1e-8
RVector correlation_spectrum(const SlaterState &state, const Subsystem &A);
RVector correlation_spectrum(const CMatrix &dm);

double entropy_from_spectrum(const RVector &delta);
// same entropy through lambda = ln(1 - delta) - ln(delta); strictly interior eigenvalues only
double entropy_via_entanglement_hamiltonian(const RVector &delta);

double entanglement_entropy(const SlaterState &state, const Subsystem &A);

double mutual_information(const SlaterState &state, int x, int xp);
// from the two diagonal densities and the hopping expectation <c^dag_x c_x'>
double mutual_information_2site(double nx, double nxp, cplx cxxp);

struct BoundaryDiagnostic {
    int rank = 0;     // rank of D^2 - D (singular values > 1e-8)
    int n_zero = 0;   // eigenvalues within 1e-8 of 0
    int n_one = 0;    // eigenvalues within 1e-8 of 1
    bool pairwise_degenerate = false;
    RVector spectrum;
};
BoundaryDiagnostic boundary_rank_diagnostic(const SlaterState &state, const Subsystem &A);

// consecutive series starting at M = first_M
std::vector<double> entropy_exponents(int first_M, const std::vector<double> &S);
std::vector<double> energy_exponents(int first_M, const std::vector<double> &deps);

struct ScalingExponents {
    std::vector<int> M;
    std::vector<double> delta_S;
    std::vector<double> delta_E;
};
ScalingExponents scaling_exponents(int first_M, const std::vector<double> &S,
                                   const std::vector<double> &deps);

} // namespace dqap
