#pragma once

#include <cmath>

#include "dqap/types.hpp"

namespace dqap {

struct LatticeSpec;

// N-fermion Slater determinant: column n of `orbitals` is the n-th orbital.
// The represented state is exp(log_scale) * det-state(orbitals); log_scale
// absorbs column rescaling of non-unitary evolution.
struct SlaterState {
    CMatrix orbitals;
    bool normalized = true;
    double log_scale = 0.0;

    SlaterState() = default;
    explicit SlaterState(CMatrix orb, bool norm = true, double log_s = 0.0)
        : orbitals(std::move(orb)), normalized(norm), log_scale(log_s) {}

    int L() const { return static_cast<int>(orbitals.rows()); }
    int N() const { return static_cast<int>(orbitals.cols()); }
    CMatrix gram() const { return orbitals.adjoint() * orbitals; }
};

enum class Bond { V1, V2 };
enum class TimeMode { Real, Imaginary };

// In-place left multiplication by exp(-i*value*V) (real time) or
// exp(-value*V) (imaginary time). Works on any L-row block.
template <class Derived>
void apply_bond_layer_inplace(Eigen::MatrixBase<Derived> &x, Bond which, double value,
                              TimeMode mode, int gamma, double t) {
    const Eigen::Index L = x.rows();
    const double a = value * t;
    double d;
    cplx off;
    if (mode == TimeMode::Real) {
        d = std::cos(a);
        off = cplx(0.0, std::sin(a));
    } else {
        d = std::cosh(a);
        off = cplx(std::sinh(a), 0.0);
    }
    auto mix = [&](Eigen::Index p, Eigen::Index q, cplx o) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const cplx u = x(p, c), v = x(q, c);
            x(p, c) = d * u + o * v;
            x(q, c) = o * u + d * v;
        }
    };
    if (which == Bond::V1) {
        for (Eigen::Index p = 0; p + 1 < L; p += 2) mix(p, p + 1, off);
    } else {
        for (Eigen::Index p = 1; p + 1 < L; p += 2) mix(p, p + 1, off);
        mix(L - 1, 0, off * static_cast<double>(gamma));
    }
}

// Left multiplication by the bond operator itself (the generator W).
template <class Derived>
void apply_bond_generator_inplace(Eigen::MatrixBase<Derived> &x, Bond which, int gamma,
                                  double t) {
    const Eigen::Index L = x.rows();
    auto swap_scaled = [&](Eigen::Index p, Eigen::Index q, double h) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const cplx u = x(p, c), v = x(q, c);
            x(p, c) = h * v;
            x(q, c) = h * u;
        }
    };
    if (which == Bond::V1) {
        for (Eigen::Index p = 0; p + 1 < L; p += 2) swap_scaled(p, p + 1, -t);
    } else {
        for (Eigen::Index p = 1; p + 1 < L; p += 2) swap_scaled(p, p + 1, -t);
        swap_scaled(L - 1, 0, -t * gamma);
    }
}

SlaterState apply_bond_layer(const SlaterState &state, Bond which, double value, TimeMode mode,
                             const LatticeSpec &spec);

// divide every column by its largest modulus, accumulating the log factor
RVector rescale_columns(SlaterState &state);

cplx overlap(const SlaterState &psi, const SlaterState &phi);

// G[x', x] = <psi| c^dag_x c_x' |phi> / <psi|phi>
CMatrix transition_density(const SlaterState &psi, const SlaterState &phi);

// <psi| c^dag_x c^dag_y c_y' c_x' |phi> / <psi|phi>
cplx two_body_expectation(const SlaterState &psi, const SlaterState &phi, int x, int y, int yp,
                          int xp);

double energy_expectation(const SlaterState &state, const CMatrix &h);

// P = Psi (Psi^dag Psi)^-1 Psi^dag, the projector onto the occupied space
CMatrix occupied_projector(const SlaterState &state);

} // namespace dqap
