#include "dqap/slater.hpp"

#include <cmath>

#include "dqap/lattice.hpp"

namespace dqap {

namespace {

void require_same_shape(const SlaterState &a, const SlaterState &b) {
    if (a.L() != b.L() || a.N() != b.N())
        throw DimensionMismatch("Slater states differ in shape");
}

// overlap matrix Psi^dag Phi, after checking it is not numerically singular
Eigen::PartialPivLU<CMatrix> overlap_lu(const SlaterState &psi, const SlaterState &phi) {
    require_same_shape(psi, phi);
    CMatrix o = psi.orbitals.adjoint() * phi.orbitals;
    Eigen::PartialPivLU<CMatrix> lu(o);
    double scale = 1.0;
    for (int n = 0; n < psi.N(); ++n)
        scale *= psi.orbitals.col(n).norm() * phi.orbitals.col(n).norm();
    if (!(std::abs(lu.determinant()) > 1e-14 * scale))
        throw SingularOverlapError("overlap determinant vanishes");
    return lu;
}

} // namespace

SlaterState apply_bond_layer(const SlaterState &state, Bond which, double value, TimeMode mode,
                             const LatticeSpec &spec) {
    if (state.L() != spec.L || state.N() != spec.N)
        throw DimensionMismatch("state shape does not match lattice");
    SlaterState out = state;
    apply_bond_layer_inplace(out.orbitals, which, value, mode, spec.gamma, spec.t);
    if (mode == TimeMode::Imaginary) out.normalized = false;
    return out;
}

RVector rescale_columns(SlaterState &state) {
    RVector f(state.N());
    for (int n = 0; n < state.N(); ++n) {
        double m = state.orbitals.col(n).cwiseAbs().maxCoeff();
        if (!(m > 0.0)) m = 1.0;
        state.orbitals.col(n) /= m;
        state.log_scale += std::log(m);
        f(n) = m;
    }
    return f;
}

cplx overlap(const SlaterState &psi, const SlaterState &phi) {
    require_same_shape(psi, phi);
    CMatrix o = psi.orbitals.adjoint() * phi.orbitals;
    return o.partialPivLu().determinant() * std::exp(psi.log_scale + phi.log_scale);
}

CMatrix transition_density(const SlaterState &psi, const SlaterState &phi) {
    auto lu = overlap_lu(psi, phi);
    return phi.orbitals * lu.solve(psi.orbitals.adjoint());
}

cplx two_body_expectation(const SlaterState &psi, const SlaterState &phi, int x, int y, int yp,
                          int xp) {
    const CMatrix G = transition_density(psi, phi);
    // g(a, b) = <c^dag_a c_b> = G[b, a]
    auto g = [&](int a, int b) { return G(b, a); };
    return g(x, xp) * g(y, yp) - g(x, yp) * g(y, xp);
}

CMatrix occupied_projector(const SlaterState &state) {
    if (state.normalized) return state.orbitals * state.orbitals.adjoint();
    Eigen::LDLT<CMatrix> ldlt(state.gram());
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > 0.0))
        throw SingularOverlapError("Gram matrix is singular");
    return state.orbitals * ldlt.solve(state.orbitals.adjoint());
}

double energy_expectation(const SlaterState &state, const CMatrix &h) {
    if (h.rows() != state.L() || h.cols() != state.L())
        throw DimensionMismatch("hopping matrix does not match state");
    const CMatrix hpsi = h * state.orbitals;
    if (state.normalized) return (state.orbitals.adjoint() * hpsi).trace().real();
    Eigen::LDLT<CMatrix> ldlt(state.gram());
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > 0.0))
        throw SingularOverlapError("Gram matrix is singular");
    return ldlt.solve(state.orbitals.adjoint() * hpsi).trace().real();
}

} // namespace dqap
