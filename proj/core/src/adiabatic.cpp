#include "dqap/adiabatic.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace dqap {

namespace {

// exp(-i A) for Hermitian A, applied from the left
CMatrix apply_unitary_exp(const CMatrix &A, const CMatrix &x) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
    if (es.info() != Eigen::Success) throw Error("hermitian eigensolver failed");
    const CMatrix &V = es.eigenvectors();
    CVector phase(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        phase(i) = std::exp(cplx(0.0, -es.eigenvalues()(i)));
    return V * (phase.asDiagonal() * (V.adjoint() * x));
}

struct LinearSchedule {
    CMatrix v1, v2, comm; // comm = [V2, V1]

    explicit LinearSchedule(const LatticeSpec &spec)
        : v1(build_v1(spec)), v2(build_v2(spec)), comm(v2 * v1 - v1 * v2) {}

    // i F for the step; Hermitian
    CMatrix generator(double ta, double tb, const EvolutionPlan &plan) const {
        const double h = tb - ta;
        const double sa = ta / plan.T, sb = tb / plan.T;
        CMatrix g = h * v1 + (0.5 * h * (sa + sb)) * v2;
        if (plan.order >= 2) {
            // F2 = (h^2/12) [A(tb), A(ta)] with A = -iH, i.e. -(h^2/12)(sb - sa)[V2, V1]
            g += cplx(0.0, -h * h * (sb - sa) / 12.0) * comm;
        }
        return g;
    }
};

} // namespace

void EvolutionPlan::validate() const {
    if (!(T > 0.0) || M < 1) throw InvalidSpec("evolution plan needs T > 0 and M >= 1");
    if (order != 1 && order != 2) throw InvalidSpec("Magnus order must be 1 or 2");
}

EvolutionPlan EvolutionPlan::with_max_step(double T, double max_step, int order) {
    EvolutionPlan p;
    p.T = T;
    p.M = std::max(1, static_cast<int>(std::ceil(T / max_step - 1e-9)));
    p.order = order;
    return p;
}

SlaterState magnus_step(const SlaterState &state, double tau_prev, double tau_next,
                        const EvolutionPlan &plan, const LatticeSpec &spec) {
    plan.validate();
    if (state.L() != spec.L) throw DimensionMismatch("state does not match lattice");
    const LinearSchedule sched(spec);
    SlaterState out = state;
    out.orbitals = apply_unitary_exp(sched.generator(tau_prev, tau_next, plan), state.orbitals);
    return out;
}

double fidelity_error(const SlaterState &exact, const SlaterState &state) {
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(overlap(exact, state))));
}

EvolutionResult evolve_linear_schedule(const LatticeSpec &spec, const EvolutionPlan &plan) {
    const GroundState gs = exact_ground_state(spec);
    EvolutionResult res;
    res.state = initial_state(spec);
    if (plan.T > 0.0) {
        plan.validate();
        const LinearSchedule sched(spec);
        const double dt = plan.delta_tau();
        for (int m = 1; m <= plan.M; ++m) {
            const double ta = (m - 1) * dt, tb = m * dt;
            res.state.orbitals = apply_unitary_exp(sched.generator(ta, tb, plan), res.state.orbitals);
        }
    }
    res.epsilon = fidelity_error(gs.state, res.state);
    return res;
}

double linear_schedule_error(const LatticeSpec &spec, const EvolutionPlan &plan) {
    spec.validate();
    if (2 * spec.N != spec.L) throw InvalidSpec("momentum route needs half filling");
    const int n = spec.L / 2;
    const double tw = spec.gamma == 1 ? 0.0 : std::numbers::pi;
    const bool evolve = plan.T > 0.0;
    if (evolve) plan.validate();
    const double dt = evolve ? plan.delta_tau() : 0.0;
    double fid = 1.0;
    for (int q = 0; q < n; ++q) {
        const double k = (2.0 * std::numbers::pi * q + tw) / n;
        const cplx e = std::polar(1.0, k);
        // cell basis (a = 0, a = 1): V1 -> -t sx, V2 -> -t [[0, e*], [e, 0]]
        Eigen::Matrix2cd v1, v2;
        v1 << 0.0, -spec.t, -spec.t, 0.0;
        v2 << 0.0, -spec.t * std::conj(e), -spec.t * e, 0.0;
        const Eigen::Matrix2cd comm = v2 * v1 - v1 * v2;
        Eigen::Vector2cd psi(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
        for (int m = 1; evolve && m <= plan.M; ++m) {
            const double ta = (m - 1) * dt, tb = m * dt, sa = ta / plan.T, sb = tb / plan.T;
            Eigen::Matrix2cd g = dt * v1 + (0.5 * dt * (sa + sb)) * v2;
            if (plan.order >= 2) g += cplx(0.0, -dt * dt * (sb - sa) / 12.0) * comm;
            // exp(-i g) for Hermitian 2x2 g = g0 + r.sigma
            const cplx g0 = 0.5 * (g(0, 0) + g(1, 1));
            const Eigen::Matrix2cd r = g - g0 * Eigen::Matrix2cd::Identity();
            const double w = std::sqrt(std::max(0.0, std::real(r(0, 0) * r(0, 0) + r(0, 1) * r(1, 0))));
            const cplx sinc = w > 1e-300 ? std::sin(w) / w : 1.0;
            const Eigen::Matrix2cd u =
                std::exp(-I_UNIT * g0) * (std::cos(w) * Eigen::Matrix2cd::Identity() - I_UNIT * sinc * r);
            psi = u * psi;
        }
        const double gap = 2.0 * spec.t * std::abs(1.0 + e);
        if (gap < 1e-10 * spec.t) throw OpenShellError("final Hamiltonian is open shell");
        // lower eigenvector of -t [[0, 1 + e*], [1 + e, 0]]
        const cplx z = (1.0 + e) / std::abs(1.0 + e);
        const Eigen::Vector2cd low(1.0 / std::sqrt(2.0), z / std::sqrt(2.0));
        fid *= std::abs(low.dot(psi));
    }
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * fid));
}

double find_T_epsilon(const LatticeSpec &spec, double target, double max_step, double T_cap,
                      int order) {
    if (!(target > 0.0) || !(target < std::sqrt(2.0)))
        throw InvalidSpec("target error must lie in (0, sqrt 2)");
    const bool bloch = 2 * spec.N == spec.L;
    auto eps = [&](double T) {
        const EvolutionPlan p =
            T > 0.0 ? EvolutionPlan::with_max_step(T, max_step, order) : EvolutionPlan{0.0, 0, order};
        return bloch ? linear_schedule_error(spec, p) : evolve_linear_schedule(spec, p).epsilon;
    };
    if (eps(0.0) <= target) return 0.0;
    // epsilon(T) oscillates, so walk up in 1% steps to the first crossing
    // instead of bracketing by doubling
    double lo = 0.0, hi = 0.01 / spec.t;
    while (eps(hi) > target) {
        lo = hi;
        hi *= 1.01;
        if (hi > T_cap) throw NoConvergence("target error not reached below the T cap");
    }
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (eps(mid) <= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double qab_schedule(int L, double s) {
    const double c = 2.0 * std::numbers::pi / L;
    const double a = -std::atan(std::sin(c) / (1.0 - std::cos(c)));
    const double b = std::atan(std::cos(c) / std::sin(c));
    return std::cos(c) - std::sin(c) * std::tan(a * s + b);
}

double qab_gap(int L, double chi, double t) {
    const double c = 2.0 * std::numbers::pi / L;
    const double d = chi - std::cos(c);
    return 2.0 * t * std::sqrt(d * d + std::sin(c) * std::sin(c));
}

namespace {

// phi^(m) with the V1 angle of layer m scaled by alpha; phi^(0) = psi_i
SlaterState alpha_state(const LatticeSpec &spec, const SlaterState &prev, const LayerPair &layer,
                        double alpha) {
    SlaterState s = prev;
    apply_bond_layer_inplace(s.orbitals, Bond::V2, layer.v2, TimeMode::Real, spec.gamma, spec.t);
    apply_bond_layer_inplace(s.orbitals, Bond::V1, alpha * layer.v1, TimeMode::Real, spec.gamma,
                             spec.t);
    return s;
}

double golden_max(const std::function<double(double)> &f, double a, double b, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double scheduling_overlap(const LatticeSpec &spec, const DqapParams &params, int m, double chi,
                          double alpha) {
    if (m < 0 || m > params.M()) throw InvalidSpec("layer index m out of range");
    const CMatrix h = build_v1(spec) + chi * build_v2(spec);
    const GroundState gs = ground_state_of(h, spec.N, spec.t);
    if (m == 0) return std::norm(overlap(gs.state, initial_state(spec)));
    const auto phis = intermediate_states(spec, DqapParams(std::vector<LayerPair>(
                                                    params.layers.begin(), params.layers.begin() + m)));
    return std::norm(overlap(gs.state, alpha_state(spec, phis[m - 1], params.layers[m - 1], alpha)));
}

OverlapMaximum maximize_overlap(const LatticeSpec &spec, const DqapParams &params, int m,
                                std::optional<double> fixed_alpha) {
    if (m < 0 || m > params.M()) throw InvalidSpec("layer index m out of range");
    const CMatrix v1 = build_v1(spec), v2 = build_v2(spec);
    SlaterState prev = initial_state(spec);
    if (m > 0) {
        prev = intermediate_states(spec, DqapParams(std::vector<LayerPair>(
                                             params.layers.begin(), params.layers.begin() + m - 1)))
                   .back();
    }
    auto phi = [&](double alpha) {
        return m == 0 ? prev : alpha_state(spec, prev, params.layers[m - 1], alpha);
    };
    auto gs_of = [&](double chi) -> std::optional<SlaterState> {
        try {
            return ground_state_of(v1 + chi * v2, spec.N, spec.t).state;
        } catch (const OpenShellError &) {
            return std::nullopt;
        }
    };
    auto F = [&](double chi, double alpha) {
        const auto gs = gs_of(chi);
        return gs ? std::norm(overlap(*gs, phi(alpha))) : 0.0;
    };

    const int n = 151;
    std::vector<SlaterState> phis;
    std::vector<double> alphas;
    for (int j = 0; j < n; ++j) {
        const double alpha = fixed_alpha ? *fixed_alpha : 0.01 * j;
        alphas.push_back(alpha);
        phis.push_back(phi(alpha));
        if (fixed_alpha) break;
    }
    OverlapMaximum best{0.0, alphas.front(), -1.0};
    for (int i = 0; i < n; ++i) {
        const double chi = 0.01 * i;
        const auto gs = gs_of(chi);
        if (!gs) continue;
        for (size_t j = 0; j < phis.size(); ++j) {
            const double f = std::norm(overlap(*gs, phis[j]));
            if (f > best.F) best = {chi, alphas[j], f};
        }
    }
    const OverlapMaximum grid = best;
    const double chi_lo = std::max(0.0, best.chi - 0.01), chi_hi = std::min(1.5, best.chi + 0.01);
    best.chi = golden_max([&](double c) { return F(c, best.alpha); }, chi_lo, chi_hi, 1e-4);
    if (!fixed_alpha) {
        const double a_lo = std::max(0.0, best.alpha - 0.01), a_hi = std::min(1.5, best.alpha + 0.01);
        best.alpha = golden_max([&](double a) { return F(best.chi, a); }, a_lo, a_hi, 1e-4);
    }
    best.F = F(best.chi, best.alpha);
    return best.F >= grid.F ? best : grid;
}

double aggregate_times(const DqapParams &params) {
    double s = 0.0;
    for (const auto &lp : params.layers) s += lp.v1 + lp.v2;
    return s;
}

double aggregate_times(const ImagParams &params) {
    double s = 0.0;
    for (const auto &lp : params.layers) s += lp.v1 + lp.v2;
    return 0.5 * s;
}

} // namespace dqap
