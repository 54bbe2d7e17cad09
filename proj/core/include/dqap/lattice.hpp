#pragma once

#include "dqap/slater.hpp"
#include "dqap/types.hpp"

namespace dqap {

enum class Boundary { Periodic, Antiperiodic };

struct LatticeSpec {
    int L = 0;
    int N = 0;
    int gamma = -1; // +1 periodic, -1 antiperiodic
    double t = 1.0;

    void validate() const;

    static LatticeSpec half_filled(int L, int gamma, double t = 1.0);
    // boundary that gives a closed shell at half filling: APBC for N even, PBC for N odd
    static LatticeSpec closed_shell(int L, double t = 1.0);
};

int gamma_of(Boundary b);

// L x L dense hopping matrices; 0-based sites, boundary term at (0, L-1)
CMatrix build_hamiltonian(const LatticeSpec &spec);
CMatrix build_v1(const LatticeSpec &spec);
CMatrix build_v2(const LatticeSpec &spec);

struct GroundState {
    SlaterState state;
    double energy = 0.0;
    RVector spectrum; // all single-particle levels, ascending
};

// Ground state of an arbitrary Hermitian hopping matrix with N particles.
GroundState ground_state_of(const CMatrix &h, int N, double scale = 1.0);
GroundState exact_ground_state(const LatticeSpec &spec);

SlaterState initial_state(const LatticeSpec &spec);

// ceil((L-2)/4): smallest depth that can reach the exact ground state
int lieb_robinson_depth(int L);

} // namespace dqap
