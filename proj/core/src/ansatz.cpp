#include "dqap/ansatz.hpp"

#include <algorithm>

namespace dqap {

namespace {

double value_of(const std::vector<LayerPair> &layers, int k) {
    const LayerPair &lp = layers[k / 2];
    return k % 2 == 0 ? lp.v2 : lp.v1;
}

void check_shape(const LatticeSpec &spec) {
    spec.validate();
    if (2 * spec.N != spec.L) throw InvalidSpec("ansatz requires half filling N = L/2");
}

} // namespace

SlaterState build_dqap_state(const LatticeSpec &spec, const DqapParams &params) {
    check_shape(spec);
    SlaterState s = initial_state(spec);
    for (int k = 0; k < params.K(); ++k)
        apply_bond_layer_inplace(s.orbitals, generator_of(k), value_of(params.layers, k),
                                 TimeMode::Real, spec.gamma, spec.t);
    return s;
}

std::vector<SlaterState> intermediate_states(const LatticeSpec &spec, const DqapParams &params) {
    check_shape(spec);
    std::vector<SlaterState> out;
    out.reserve(params.M() + 1);
    out.push_back(initial_state(spec));
    for (int m = 0; m < params.M(); ++m) {
        SlaterState s = out.back();
        apply_bond_layer_inplace(s.orbitals, Bond::V2, params.layers[m].v2, TimeMode::Real,
                                 spec.gamma, spec.t);
        apply_bond_layer_inplace(s.orbitals, Bond::V1, params.layers[m].v1, TimeMode::Real,
                                 spec.gamma, spec.t);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<int> orbital_support(const SlaterState &state, double threshold) {
    const int L = state.L();
    std::vector<int> out(state.N(), 0);
    for (int n = 0; n < state.N(); ++n) {
        std::vector<int> pos;
        for (int x = 0; x < L; ++x)
            if (std::abs(state.orbitals(x, n)) > threshold) pos.push_back(x);
        if (pos.empty()) continue;
        int max_gap = pos.front() + L - pos.back();
        for (size_t i = 1; i < pos.size(); ++i) max_gap = std::max(max_gap, pos[i] - pos[i - 1]);
        out[n] = L - max_gap + 1;
    }
    return out;
}

std::vector<CMatrix> dqap_param_derivatives(const LatticeSpec &spec, const DqapParams &params) {
    check_shape(spec);
    const int K = params.K();
    // prefix[k] = state after the first k layers
    std::vector<CMatrix> prefix;
    prefix.reserve(K + 1);
    prefix.push_back(initial_state(spec).orbitals);
    for (int k = 0; k < K; ++k) {
        CMatrix next = prefix.back();
        apply_bond_layer_inplace(next, generator_of(k), value_of(params.layers, k),
                                 TimeMode::Real, spec.gamma, spec.t);
        prefix.push_back(std::move(next));
    }
    std::vector<CMatrix> d(K);
    for (int k = 0; k < K; ++k) {
        CMatrix x = prefix[k + 1];
        apply_bond_generator_inplace(x, generator_of(k), spec.gamma, spec.t);
        x *= -I_UNIT;
        for (int l = k + 1; l < K; ++l)
            apply_bond_layer_inplace(x, generator_of(l), value_of(params.layers, l),
                                     TimeMode::Real, spec.gamma, spec.t);
        d[k] = std::move(x);
    }
    return d;
}

RVector dqap_energy_gradient(const LatticeSpec &spec, const DqapParams &params, const CMatrix &h) {
    check_shape(spec);
    const int K = params.K();
    std::vector<CMatrix> prefix;
    prefix.reserve(K + 1);
    prefix.push_back(initial_state(spec).orbitals);
    for (int k = 0; k < K; ++k) {
        CMatrix next = prefix.back();
        apply_bond_layer_inplace(next, generator_of(k), value_of(params.layers, k),
                                 TimeMode::Real, spec.gamma, spec.t);
        prefix.push_back(std::move(next));
    }
    // lambda_k = U_{>k}^dag h Psi; dE/dtheta_k = 2 Re tr[(-i W_k Phi_k)^dag lambda_k]
    CMatrix lambda = h * prefix.back();
    RVector g(K);
    for (int k = K - 1; k >= 0; --k) {
        CMatrix w = prefix[k + 1];
        apply_bond_generator_inplace(w, generator_of(k), spec.gamma, spec.t);
        g(k) = 2.0 * (I_UNIT * (w.adjoint() * lambda).trace()).real();
        apply_bond_layer_inplace(lambda, generator_of(k), -value_of(params.layers, k),
                                 TimeMode::Real, spec.gamma, spec.t);
    }
    return g;
}

SlaterState build_imag_state(const LatticeSpec &spec, const ImagParams &params) {
    check_shape(spec);
    SlaterState s = initial_state(spec);
    for (int k = 0; k < params.K(); ++k) {
        apply_bond_layer_inplace(s.orbitals, generator_of(k), value_of(params.layers, k),
                                 TimeMode::Imaginary, spec.gamma, spec.t);
        s.normalized = false;
        rescale_columns(s);
    }
    return s;
}

ImagDerivatives imag_param_derivatives(const LatticeSpec &spec, const ImagParams &params) {
    check_shape(spec);
    const int K = params.K();
    std::vector<CMatrix> prefix;
    std::vector<RVector> scales;
    prefix.reserve(K + 1);
    SlaterState s = initial_state(spec);
    prefix.push_back(s.orbitals);
    for (int k = 0; k < K; ++k) {
        apply_bond_layer_inplace(s.orbitals, generator_of(k), value_of(params.layers, k),
                                 TimeMode::Imaginary, spec.gamma, spec.t);
        s.normalized = false;
        scales.push_back(rescale_columns(s));
        prefix.push_back(s.orbitals);
    }
    ImagDerivatives out;
    out.state = s;
    out.d.resize(K);
    for (int k = 0; k < K; ++k) {
        CMatrix x = prefix[k + 1];
        apply_bond_generator_inplace(x, generator_of(k), spec.gamma, spec.t);
        x = -x;
        for (int l = k + 1; l < K; ++l) {
            apply_bond_layer_inplace(x, generator_of(l), value_of(params.layers, l),
                                     TimeMode::Imaginary, spec.gamma, spec.t);
            x = x * scales[l].cwiseInverse().asDiagonal();
        }
        out.d[k] = std::move(x);
    }
    return out;
}

DqapParams linear_schedule_params(int M, double dtau) {
    DqapParams p;
    p.layers.resize(M);
    for (int m = 1; m <= M; ++m) p.layers[m - 1] = {dtau, dtau * m / M};
    return p;
}

DqapParams warm_start(const DqapParams &params) {
    const int M = params.M();
    if (M < 1) throw InvalidSpec("warm start needs at least one layer");
    if (M == 1) return DqapParams({params.layers[0], params.layers[0]});
    // 1-based: average layers h and h+1, insert at position h+1
    const int h = (M % 2 == 0) ? M / 2 : (M - 1) / 2;
    const LayerPair &a = params.layers[h - 1];
    const LayerPair &b = params.layers[h];
    DqapParams out;
    out.layers.reserve(M + 1);
    out.layers.insert(out.layers.end(), params.layers.begin(), params.layers.begin() + h);
    out.layers.push_back({0.5 * (a.v1 + b.v1), 0.5 * (a.v2 + b.v2)});
    out.layers.insert(out.layers.end(), params.layers.begin() + h, params.layers.end());
    return out;
}

CMatrix translate_two(const CMatrix &x, int gamma) {
    const Eigen::Index L = x.rows();
    CMatrix y(L, x.cols());
    y.bottomRows(L - 2) = x.topRows(L - 2);
    y.topRows(2) = static_cast<double>(gamma) * x.bottomRows(2);
    return y;
}

} // namespace dqap
