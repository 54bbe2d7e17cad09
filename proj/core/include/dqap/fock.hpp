#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "dqap/entanglement.hpp"
#include "dqap/slater.hpp"

namespace dqap {

inline constexpr std::size_t kFockDefaultCap = 1000;

// Fixed-N occupation basis; bit x of a mask is site x. Basis states are
// c^dag_{x1} c^dag_{x2} ... |0> with x1 < x2 < ...
struct FockBasis {
    int L = 0;
    int N = 0;
    std::vector<std::uint32_t> masks; // ascending
    std::vector<int> index;           // mask -> position, -1 if outside the sector

    static std::shared_ptr<const FockBasis> make(int L, int N, std::size_t cap = kFockDefaultCap);
    std::size_t size() const { return masks.size(); }
};

struct FockVector {
    std::shared_ptr<const FockBasis> basis;
    CVector amp;
};

FockVector slater_to_fock(const SlaterState &state, std::size_t cap = kFockDefaultCap);

// many-body matrix of sum_{x,x'} h[x,x'] c^dag_x c_x'
CMatrix fock_hamiltonian_matrix(const FockBasis &basis, const CMatrix &h);
FockVector fock_apply_hamiltonian(const FockVector &vec, const CMatrix &h);
// exp(-z H) via dense eigendecomposition of the many-body matrix
FockVector fock_evolve(const FockVector &vec, const CMatrix &h, cplx z);

cplx fock_inner(const FockVector &bra, const FockVector &ket);
// <bra| c^dag_x c_x' |ket>
cplx fock_one_body(const FockVector &bra, const FockVector &ket, int x, int xp);
// <bra| c^dag_x c^dag_y c_y' c_x' |ket>
cplx fock_two_body(const FockVector &bra, const FockVector &ket, int x, int y, int yp, int xp);

// reduced density matrix on A over 2^{L_A} local occupations (bit i = A_sorted[i])
CMatrix fock_reduced_dm(const FockVector &vec, const Subsystem &A);
double fock_entropy(const FockVector &vec, const Subsystem &A);

} // namespace dqap
