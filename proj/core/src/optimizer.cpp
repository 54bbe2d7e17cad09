#include "dqap/optimizer.hpp"

#include <cmath>
#include <random>

namespace dqap {

namespace {

struct GramInverse {
    CMatrix F;
    bool identity;
};

GramInverse gram_inverse(const SlaterState &state) {
    if (state.normalized) return {CMatrix(), true};
    Eigen::LDLT<CMatrix> ldlt(state.gram());
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > 0.0))
        throw SingularOverlapError("Gram matrix is singular");
    return {ldlt.solve(CMatrix::Identity(state.N(), state.N())), false};
}

double value_of(const std::vector<LayerPair> &layers, int k) {
    const LayerPair &lp = layers[k / 2];
    return k % 2 == 0 ? lp.v2 : lp.v1;
}

NaturalGradientWorkspace translation_workspace(const LatticeSpec &spec, const DqapParams &params,
                                               const CMatrix &h) {
    const int K = params.K();
    const int L = spec.L, N = spec.N;
    std::vector<CVector> prefix;
    prefix.reserve(K + 1);
    prefix.push_back(initial_state(spec).orbitals.col(0));
    for (int k = 0; k < K; ++k) {
        CVector next = prefix.back();
        apply_bond_layer_inplace(next, generator_of(k), value_of(params.layers, k),
                                 TimeMode::Real, spec.gamma, spec.t);
        prefix.push_back(std::move(next));
    }
    // every column is a twisted two-site translate of the first one
    CMatrix psi(L, N);
    psi.col(0) = prefix.back();
    for (int n = 1; n < N; ++n) psi.col(n) = translate_two(psi.col(n - 1), spec.gamma);

    CMatrix X(L, K);
    for (int k = 0; k < K; ++k) {
        CVector x = prefix[k + 1];
        apply_bond_generator_inplace(x, generator_of(k), spec.gamma, spec.t);
        x *= -I_UNIT;
        for (int l = k + 1; l < K; ++l)
            apply_bond_layer_inplace(x, generator_of(l), value_of(params.layers, l),
                                     TimeMode::Real, spec.gamma, spec.t);
        X.col(k) = x - psi * (psi.adjoint() * x);
    }
    const CVector hpsi = h * prefix.back();
    NaturalGradientWorkspace ws;
    ws.S = static_cast<double>(N) * (X.adjoint() * X);
    ws.f = static_cast<double>(N) * (X.adjoint() * hpsi);
    ws.energy = N * prefix.back().dot(hpsi).real();
    return ws;
}

} // namespace

NaturalGradientWorkspace assemble_metric_and_force(const SlaterState &state,
                                                   const std::vector<CMatrix> &derivs,
                                                   const CMatrix &h) {
    const int K = static_cast<int>(derivs.size());
    const Eigen::Index L = state.L(), N = state.N();
    const GramInverse gi = gram_inverse(state);
    const CMatrix &G = state.orbitals;
    const CMatrix hG = h * G;

    // X_k = (1 - G F G^dag) dG_k and Z_k = X_k F, so that
    // S_kk' = tr[F X_k^dag X_k'] = <Z_k, X_k'> and f_k = <Z_k, h G>
    CMatrix X(L * N, K), Z(L * N, K);
    for (int k = 0; k < K; ++k) {
        if (derivs[k].rows() != L || derivs[k].cols() != N)
            throw DimensionMismatch("derivative shape does not match state");
        CMatrix proj = G.adjoint() * derivs[k];
        if (!gi.identity) proj = gi.F * proj;
        CMatrix x = derivs[k] - G * proj;
        CMatrix z = gi.identity ? x : CMatrix(x * gi.F);
        X.col(k) = Eigen::Map<const CVector>(x.data(), L * N);
        Z.col(k) = Eigen::Map<const CVector>(z.data(), L * N);
    }
    NaturalGradientWorkspace ws;
    ws.S = Z.adjoint() * X;
    ws.f = Z.adjoint() * Eigen::Map<const CVector>(hG.data(), L * N);
    ws.energy = gi.identity ? (G.adjoint() * hG).trace().real()
                            : (gi.F * (G.adjoint() * hG)).trace().real();
    return ws;
}

NaturalGradientWorkspace assemble_dqap_workspace(const LatticeSpec &spec, const DqapParams &params,
                                                 const CMatrix &h, MetricBackend backend) {
    spec.validate();
    if (2 * spec.N != spec.L) throw InvalidSpec("DQAP requires half filling N = L/2");
    if (backend == MetricBackend::Translation || backend == MetricBackend::Auto)
        return translation_workspace(spec, params, h);
    return assemble_metric_and_force(build_dqap_state(spec, params),
                                     dqap_param_derivatives(spec, params), h);
}

NaturalGradientWorkspace assemble_imag_workspace(const LatticeSpec &spec, const ImagParams &params,
                                                 const CMatrix &h) {
    const ImagDerivatives d = imag_param_derivatives(spec, params);
    return assemble_metric_and_force(d.state, d.d, h);
}

RVector natural_gradient_step(const NaturalGradientWorkspace &ws, double ridge) {
    const int K = ws.K();
    if (K == 0) return RVector();
    RMatrix A = 2.0 * ws.S.real();
    A.diagonal().array() += ridge;
    const RVector b = -ws.delta_beta * 2.0 * ws.f.real();

    Eigen::LDLT<RMatrix> ldlt(A);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        RVector x = ldlt.solve(b);
        if (x.allFinite()) return x;
    }
    // least-squares fallback with a relative eigenvalue cutoff
    Eigen::SelfAdjointEigenSolver<RMatrix> es(A);
    if (es.info() != Eigen::Success) throw LinearSolveError("eigensolver failed on the metric");
    const RVector &w = es.eigenvalues();
    const double cut = 1e-12 * w.cwiseAbs().maxCoeff();
    RVector c = es.eigenvectors().transpose() * b;
    for (int i = 0; i < K; ++i) c(i) = std::abs(w(i)) > cut ? c(i) / w(i) : 0.0;
    RVector x = es.eigenvectors() * c;
    if (!x.allFinite()) throw LinearSolveError("natural-gradient system is singular");
    return x;
}

namespace {

template <class P>
P random_layers(int M, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    P p;
    p.layers.resize(M);
    for (auto &lp : p.layers) {
        lp.v1 = u(rng);
        lp.v2 = u(rng);
    }
    return p;
}

template <class P, class Assemble>
OptResult<P> run_natural_gradient(P params, const OptimizerConfig &config, Assemble assemble) {
    if (config.max_iters < 1 || !(config.energy_tol > 0.0))
        throw InvalidSpec("optimizer needs max_iters >= 1 and a positive energy_tol");
    OptResult<P> res;
    NaturalGradientWorkspace ws = assemble(params);
    ws.delta_beta = config.delta_beta;
    if (config.keep_trace) res.trace.push_back(ws.energy);
    if (params.K() == 0) {
        res.params = params;
        res.energy = ws.energy;
        res.converged = true;
        return res;
    }
    RVector theta = params.flatten();
    double e_prev = ws.energy;
    for (int it = 1; it <= config.max_iters; ++it) {
        const RVector step = natural_gradient_step(ws, config.ridge);
        theta += step;
        params = P::unflatten(theta);
        ws = assemble(params);
        ws.delta_beta = config.delta_beta;
        if (config.keep_trace) res.trace.push_back(ws.energy);
        res.iterations = it;
        const double rel = std::abs(ws.energy - e_prev) / (std::abs(ws.energy) + 1.0);
        e_prev = ws.energy;
        const bool small_step =
            config.param_tol <= 0.0 || step.cwiseAbs().maxCoeff() < config.param_tol;
        if (rel < config.energy_tol && small_step) {
            res.converged = true;
            break;
        }
    }
    res.params = params;
    res.energy = ws.energy;
    return res;
}

} // namespace

DqapParams make_initial_params(const LatticeSpec &spec, int M, const OptimizerConfig &config,
                               const DqapParams *previous) {
    if (M < 0) throw InvalidSpec("layer count must be non-negative");
    const double dtau = 0.01 / spec.t;
    switch (config.init_mode) {
    case InitMode::LinearSchedule:
        return linear_schedule_params(M, dtau);
    case InitMode::ZerosNoise:
        return random_layers<DqapParams>(M, config.seed, -config.noise / spec.t,
                                         config.noise / spec.t);
    case InitMode::Random:
        return random_layers<DqapParams>(M, config.seed, 0.0, dtau);
    case InitMode::WarmStart:
        if (!previous) throw InvalidSpec("warm start needs the optimized M-1 parameters");
        if (previous->M() == M) return *previous;
        if (previous->M() + 1 != M) throw InvalidSpec("warm start expects M-1 layers");
        return warm_start(*previous);
    }
    throw InvalidSpec("unknown init mode");
}

ImagParams make_initial_imag_params(const LatticeSpec &spec, int M, const OptimizerConfig &config) {
    const double dtau = 0.01 / spec.t;
    switch (config.init_mode) {
    case InitMode::ZerosNoise:
        return random_layers<ImagParams>(M, config.seed, -config.noise / spec.t,
                                         config.noise / spec.t);
    case InitMode::Random:
        return random_layers<ImagParams>(M, config.seed, 0.0, dtau);
    default:
        return ImagParams::unflatten(linear_schedule_params(M, dtau).flatten());
    }
}

OptResult<DqapParams> optimize_from(const LatticeSpec &spec, DqapParams init,
                                    const OptimizerConfig &config) {
    const CMatrix h = build_hamiltonian(spec);
    return run_natural_gradient(std::move(init), config, [&](const DqapParams &p) {
        return assemble_dqap_workspace(spec, p, h, config.backend);
    });
}

OptResult<DqapParams> optimize(const LatticeSpec &spec, int M, const OptimizerConfig &config,
                               const DqapParams *previous) {
    return optimize_from(spec, make_initial_params(spec, M, config, previous), config);
}

OptResult<ImagParams> optimize_imaginary_from(const LatticeSpec &spec, ImagParams init,
                                              const OptimizerConfig &config) {
    const CMatrix h = build_hamiltonian(spec);
    return run_natural_gradient(std::move(init), config, [&](const ImagParams &p) {
        return assemble_imag_workspace(spec, p, h);
    });
}

OptResult<ImagParams> optimize_imaginary(const LatticeSpec &spec, int M,
                                         const OptimizerConfig &config) {
    return optimize_imaginary_from(spec, make_initial_imag_params(spec, M, config), config);
}

bool is_monotone(const std::vector<double> &trace, double slack) {
    for (size_t i = 1; i < trace.size(); ++i)
        if (trace[i] > trace[i - 1] + slack) return false;
    return true;
}

} // namespace dqap
