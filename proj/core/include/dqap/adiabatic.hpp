#pragma once

#include <optional>

#include "dqap/ansatz.hpp"

namespace dqap {

struct EvolutionPlan {
    double T = 0.0;
    int M = 0;
    int order = 1; // Magnus truncation order, 1 or 2

    double delta_tau() const { return T / M; }
    void validate() const;
    // fewest steps with T/M <= max_step
    static EvolutionPlan with_max_step(double T, double max_step, int order = 1);
};

// One Magnus step of H(tau) = V1 + (tau/T) V2 from tau_prev to tau_next.
SlaterState magnus_step(const SlaterState &state, double tau_prev, double tau_next,
                        const EvolutionPlan &plan, const LatticeSpec &spec);

struct EvolutionResult {
    SlaterState state;
    double epsilon = 0.0; // sqrt(2 - 2 |<exact|Psi(T)>|)
};

// T = 0 is accepted and returns the initial state unchanged.
EvolutionResult evolve_linear_schedule(const LatticeSpec &spec, const EvolutionPlan &plan);

double fidelity_error(const SlaterState &exact, const SlaterState &state);

// Same epsilon as evolve_linear_schedule, computed in the 2x2 Bloch blocks of
// the two-site translation. O(L M) instead of O(L^3 M).
double linear_schedule_error(const LatticeSpec &spec, const EvolutionPlan &plan);

// smallest T with epsilon(T) <= target at fixed step max_step (0.1% relative)
double find_T_epsilon(const LatticeSpec &spec, double target, double max_step = 0.01,
                      double T_cap = 1e5, int order = 1);

double qab_schedule(int L, double s);
double qab_gap(int L, double chi, double t = 1.0);

// |<GS of V1 + chi V2 | phi^(m)(theta, alpha)>|^2
double scheduling_overlap(const LatticeSpec &spec, const DqapParams &params, int m, double chi,
                          double alpha);

struct OverlapMaximum {
    double chi = 0.0;
    double alpha = 1.0;
    double F = 0.0;
};

// Grid scan over chi, alpha in [0, 1.5] (step 0.01) then golden-section
// refinement per axis to 1e-4. With `fixed_alpha` only chi is searched.
OverlapMaximum maximize_overlap(const LatticeSpec &spec, const DqapParams &params, int m,
                                std::optional<double> fixed_alpha = std::nullopt);

double aggregate_times(const DqapParams &params); // sum of all angles
double aggregate_times(const ImagParams &params); // half the sum of all steps

} // namespace dqap
