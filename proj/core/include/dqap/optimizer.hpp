#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dqap/ansatz.hpp"

namespace dqap {

struct NaturalGradientWorkspace {
    CMatrix S;
    CVector f;
    double delta_beta = 0.01;
    double energy = 0.0;
    int K() const { return static_cast<int>(f.size()); }
};

// Metric and force from explicit derivatives. For imaginary time the state
// need not be normalized and every trace is weighted by F = (G^dag G)^-1.
NaturalGradientWorkspace assemble_metric_and_force(const SlaterState &state,
                                                   const std::vector<CMatrix> &derivs,
                                                   const CMatrix &h);

enum class MetricBackend {
    Auto,       // translation-reduced whenever it applies
    General,    // explicit L x N derivative matrices
    Translation // one orbital column plus two-site translation symmetry
};

NaturalGradientWorkspace assemble_dqap_workspace(const LatticeSpec &spec, const DqapParams &params,
                                                 const CMatrix &h,
                                                 MetricBackend backend = MetricBackend::Auto);
NaturalGradientWorkspace assemble_imag_workspace(const LatticeSpec &spec, const ImagParams &params,
                                                 const CMatrix &h);

// Solves (S + S* + ridge) dtheta = -delta_beta (f + f*).
RVector natural_gradient_step(const NaturalGradientWorkspace &ws, double ridge = 1e-10);

template <class Tag>
LayeredParams<Tag> natural_gradient_step(const NaturalGradientWorkspace &ws,
                                         const LayeredParams<Tag> &params, double ridge = 1e-10) {
    return LayeredParams<Tag>::unflatten(params.flatten() + natural_gradient_step(ws, ridge));
}

enum class InitMode { ZerosNoise, LinearSchedule, WarmStart, Random };

struct OptimizerConfig {
    int max_iters = 200000;
    double energy_tol = 1e-13;
    // when > 0, convergence also requires max |dtheta| below this
    double param_tol = 0.0;
    // Real-time runs need a firm ridge: at small angles the metric has
    // near-null directions and 1e-10 lets single steps overshoot.
    double ridge = 1e-3;
    double delta_beta = 0.01;
    InitMode init_mode = InitMode::LinearSchedule;
    std::uint64_t seed = 0;
    double noise = 1e-3; // amplitude for ZerosNoise, in units of 1/t
    MetricBackend backend = MetricBackend::Auto;
    bool keep_trace = true;

    // Imaginary-time metric is well conditioned and a large ridge stalls it.
    static OptimizerConfig imaginary_defaults() {
        OptimizerConfig c;
        c.ridge = 1e-10;
        return c;
    }
};

template <class P>
struct OptResult {
    P params;
    std::vector<double> trace;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Initial parameters for M layers. WarmStart requires `previous` (M-1 layers).
DqapParams make_initial_params(const LatticeSpec &spec, int M, const OptimizerConfig &config,
                               const DqapParams *previous = nullptr);
ImagParams make_initial_imag_params(const LatticeSpec &spec, int M, const OptimizerConfig &config);

OptResult<DqapParams> optimize_from(const LatticeSpec &spec, DqapParams init,
                                    const OptimizerConfig &config);
OptResult<DqapParams> optimize(const LatticeSpec &spec, int M, const OptimizerConfig &config,
                               const DqapParams *previous = nullptr);

OptResult<ImagParams> optimize_imaginary_from(const LatticeSpec &spec, ImagParams init,
                                              const OptimizerConfig &config);
OptResult<ImagParams> optimize_imaginary(const LatticeSpec &spec, int M,
                                         const OptimizerConfig &config);

// energies at every trace entry are non-increasing within slack
bool is_monotone(const std::vector<double> &trace, double slack = 1e-12);

} // namespace dqap
