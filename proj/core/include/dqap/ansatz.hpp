#pragma once

#include <vector>

#include "dqap/lattice.hpp"
#include "dqap/slater.hpp"

namespace dqap {

// One layer: v1 multiplies V1, v2 multiplies V2. Within a layer V2 acts first.
struct LayerPair {
    double v1 = 0.0;
    double v2 = 0.0;
    bool operator==(const LayerPair &) const = default;
};

// Flattened order is (v2^(1), v1^(1), v2^(2), v1^(2), ...), i.e. the order
// in which the layers act on the initial state.
template <class Tag>
struct LayeredParams {
    std::vector<LayerPair> layers;

    LayeredParams() = default;
    explicit LayeredParams(std::vector<LayerPair> l) : layers(std::move(l)) {}

    int M() const { return static_cast<int>(layers.size()); }
    int K() const { return 2 * M(); }

    RVector flatten() const {
        RVector v(K());
        for (int m = 0; m < M(); ++m) {
            v(2 * m) = layers[m].v2;
            v(2 * m + 1) = layers[m].v1;
        }
        return v;
    }
    static LayeredParams unflatten(const RVector &v) {
        if (v.size() % 2 != 0) throw DimensionMismatch("parameter vector must have even length");
        LayeredParams p;
        p.layers.resize(v.size() / 2);
        for (int m = 0; m < p.M(); ++m) p.layers[m] = {v(2 * m + 1), v(2 * m)};
        return p;
    }
    bool operator==(const LayeredParams &) const = default;
};

struct RealTimeTag {};
struct ImagTimeTag {};
using DqapParams = LayeredParams<RealTimeTag>;
using ImagParams = LayeredParams<ImagTimeTag>;

// generator of flattened parameter k
inline Bond generator_of(int k) { return k % 2 == 0 ? Bond::V2 : Bond::V1; }

SlaterState build_dqap_state(const LatticeSpec &spec, const DqapParams &params);
// Phi_0 .. Phi_M, Phi_0 = psi_i
std::vector<SlaterState> intermediate_states(const LatticeSpec &spec, const DqapParams &params);

// per column: length of the shortest cyclic window holding every entry above threshold
std::vector<int> orbital_support(const SlaterState &state, double threshold = 1e-12);

// d Psi / d theta_k for every flattened k
std::vector<CMatrix> dqap_param_derivatives(const LatticeSpec &spec, const DqapParams &params);

// dE/dtheta by a forward sweep and a backward adjoint sweep
RVector dqap_energy_gradient(const LatticeSpec &spec, const DqapParams &params, const CMatrix &h);

SlaterState build_imag_state(const LatticeSpec &spec, const ImagParams &params);

// Derivatives carry the same column rescaling as `state`, so any
// Gram-normalized quantity built from the pair is scale independent.
struct ImagDerivatives {
    SlaterState state;
    std::vector<CMatrix> d;
};
ImagDerivatives imag_param_derivatives(const LatticeSpec &spec, const ImagParams &params);

// linear-schedule discretization: theta_1 = dtau, theta_2 = (m/M) dtau
DqapParams linear_schedule_params(int M, double dtau);

// M -> M+1 by inserting the average of the two middle layers
DqapParams warm_start(const DqapParams &params);

// twisted translation by two sites (commutes with V1, V2 and T)
CMatrix translate_two(const CMatrix &x, int gamma);

} // namespace dqap
