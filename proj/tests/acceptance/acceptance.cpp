// Acceptance suite: one PASS/FAIL line per criterion. Usage: dqap_acceptance [N ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>

#include <fmt/format.h>

#include "dqap/adiabatic.hpp"
#include "dqap/lab.hpp"
#include "dqap/optimizer.hpp"
#include "support/oracles.hpp"

using namespace dqap;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double exact_energy(const LatticeSpec &s) { return exact_ground_state(s).energy; }

OptimizerConfig tight(double param_tol) {
    OptimizerConfig c;
    c.param_tol = param_tol;
    return c;
}

// systematic series M = 1, 2, ... each warm-started from the previous optimum
std::vector<OptResult<DqapParams>> warm_series(const LatticeSpec &spec, int M_max, double param_tol) {
    std::vector<OptResult<DqapParams>> out;
    const OptimizerConfig c = tight(param_tol);
    out.push_back(optimize(spec, 1, c));
    OptimizerConfig w = c;
    w.init_mode = InitMode::WarmStart;
    for (int M = 2; M <= M_max; ++M) out.push_back(optimize(spec, M, w, &out.back().params));
    return out;
}

Outcome c1() {
    std::string d;
    bool ok = true;
    for (auto [L, gamma] : {std::pair{16, -1}, {18, 1}}) {
        const auto spec = LatticeSpec::half_filled(L, gamma);
        const double dE = optimize(spec, lieb_robinson_depth(L), OptimizerConfig{}).energy -
                          exact_energy(spec);
        ok = ok && dE < 1e-10 * spec.t;
        d += fmt::format("L={} dE={:.2e} ", L, dE);
    }
    return {ok, d};
}

Outcome c2() {
    std::vector<double> e;
    std::string d;
    for (auto [L, gamma] : {std::pair{16, -1}, {24, -1}, {32, -1}, {18, 1}}) {
        e.push_back(optimize(LatticeSpec::half_filled(L, gamma), 3, OptimizerConfig{}).energy / L);
        d += fmt::format("L={} E/L={:.15f} ", L, e.back());
    }
    double spread = 0.0;
    for (double v : e) spread = std::max(spread, std::abs(v - e.front()));
    d += fmt::format("spread={:.1e}", spread);
    return {spread <= 1e-10, d};
}

Outcome c3() {
    const OptimizerConfig c = tight(1e-10);
    std::vector<double> S2;
    double worst_full = 0.0;
    for (int L : {24, 40}) {
        const auto spec = LatticeSpec::half_filled(L, -1);
        const auto A = contiguous_block(0, L / 2);
        S2.push_back(entanglement_entropy(build_dqap_state(spec, optimize(spec, 2, c).params), A));
        const double full = entanglement_entropy(build_dqap_state(spec, optimize(spec, L / 4, c).params), A);
        worst_full = std::max(worst_full, std::abs(full - entanglement_entropy(exact_ground_state(spec).state, A)));
    }
    const double gap = std::abs(S2[0] - S2[1]);
    // the entropy error of a variational optimum is first order in the state error,
    // so at dE ~ 1e-14 it sits near 1e-8; 1e-6 is the agreement reachable in double precision
    return {gap <= 1e-8 && worst_full <= 1e-6,
            fmt::format("S(M=2) L24={:.12f} L40={:.12f} diff={:.1e}; |S(M=L/4)-S_exact| max={:.1e}", S2[0],
                        S2[1], gap, worst_full)};
}

Outcome c4() {
    const int L = 160;
    const auto spec = LatticeSpec::half_filled(L, -1);
    const auto series = warm_series(spec, 20, 1e-9);
    std::vector<double> S, deps;
    for (int M = 10; M <= 20; ++M) {
        const auto &r = series[M - 1];
        S.push_back(entanglement_entropy(build_dqap_state(spec, r.params), contiguous_block(0, L / 2)));
        deps.push_back(r.energy / L + 2.0 / std::numbers::pi);
    }
    const auto ex = scaling_exponents(10, S, deps);
    bool ok = true;
    for (double v : ex.delta_S) ok = ok && v >= 0.85 && v <= 1.15;
    for (double v : ex.delta_E) ok = ok && v >= 0.85 && v <= 1.15;
    const bool trend = std::abs(ex.delta_S.back() - 1) < std::abs(ex.delta_S.front() - 1) &&
                       std::abs(ex.delta_E.back() - 1) < std::abs(ex.delta_E.front() - 1);
    return {ok && trend, fmt::format("M=10..19 delta_S {:.4f} -> {:.4f}, delta_E {:.4f} -> {:.4f}, trend to 1: {}",
                                     ex.delta_S.front(), ex.delta_S.back(), ex.delta_E.front(),
                                     ex.delta_E.back(), trend ? "yes" : "no")};
}

Outcome c5() {
    const auto spec = LatticeSpec::half_filled(40, -1);
    const OptimizerConfig c = tight(1e-10);
    bool ok = true;
    std::string d;
    for (int M = 1; M <= 9; ++M) {
        const auto st = build_dqap_state(spec, optimize(spec, M, c).params);
        double beyond = 0.0, at = 0.0;
        bool has_edge = false;
        for (int x = 0; x < 40; ++x)
            for (int y = x + 1; y < 40; ++y) {
                const int dist = std::min(y - x, 40 - (y - x));
                if (dist <= 4 * M + 1 && dist != 4 * M + 1) continue;
                const double I = mutual_information(st, x, y);
                if (dist > 4 * M + 1) beyond = std::max(beyond, I);
                if (dist == 4 * M + 1) {
                    has_edge = true;
                    at = std::max(at, I);
                }
            }
        ok = ok && beyond <= 1e-12 && (!has_edge || at > 1e-6);
        d += has_edge ? fmt::format("M={} max_out={:.0e} edge={:.1e}; ", M, beyond, at)
                      : fmt::format("M={} edge n/a; ", M);
    }
    return {ok, d};
}

Outcome c6() {
    std::vector<double> Ls, T;
    std::string d;
    for (int L : {16, 24, 32, 40}) {
        const auto series = warm_series(LatticeSpec::half_filled(L, -1), L / 4, 1e-10);
        Ls.push_back(L);
        T.push_back(aggregate_times(series.back().params));
        d += fmt::format("L={} T_eff={:.3f} ", L, T.back());
    }
    const auto f = lab::fit_power_law(Ls, T);
    d += fmt::format("slope={:.3f}+/-{:.3f}", f.exponent, f.stderr_exponent);
    return {std::abs(f.exponent - 1.0) <= 0.15, d};
}

Outcome c7() {
    const auto spec = LatticeSpec::half_filled(30, 1);
    const auto gs = exact_ground_state(spec);
    std::vector<double> dE;
    double dist = 1.0;
    for (int M = 1; M <= 3; ++M) {
        const auto r = optimize_imaginary(spec, M, OptimizerConfig::imaginary_defaults());
        dE.push_back(r.energy - gs.energy);
        if (M == 3) {
            const auto st = build_imag_state(spec, r.params);
            const double ov = std::norm(overlap(gs.state, st)) / std::abs(overlap(st, st));
            dist = std::sqrt(std::max(0.0, 1.0 - ov));
        }
    }
    const bool decades = dE[1] <= 0.1 * dE[0] && dE[2] <= 0.1 * dE[1];
    return {dE[2] <= 2e-5 * spec.t && dist < 1e-2 && decades,
            fmt::format("dE M=1,2,3: {:.3e} {:.3e} {:.3e}; distance(M=3)={:.2e}", dE[0], dE[1], dE[2], dist)};
}

Outcome c8() {
    std::vector<double> Ls, T;
    std::string d;
    for (int L : {8, 12, 16, 20}) {
        Ls.push_back(L);
        T.push_back(find_T_epsilon(LatticeSpec::closed_shell(L), 0.01, 0.01));
        d += fmt::format("L={} T_eps={:.2f} ", L, T.back());
    }
    const auto f = lab::fit_power_law(Ls, T);
    const auto spec = LatticeSpec::closed_shell(10);
    std::vector<double> Ts, eps;
    for (double t : {10.0, 20.0, 50.0, 100.0}) {
        Ts.push_back(t);
        eps.push_back(linear_schedule_error(spec, EvolutionPlan::with_max_step(t, 0.01)));
    }
    const auto g = lab::fit_power_law(Ts, eps);
    d += fmt::format("slope={:.3f}+/-{:.3f}; eps(T) slope at L=10: {:.3f}", f.exponent, f.stderr_exponent, g.exponent);
    return {std::abs(f.exponent - 2.0) <= 0.3 && std::abs(g.exponent + 1.0) <= 0.1, d};
}

Outcome c9() {
    double worst_end = 0.0, worst_ode = 0.0;
    for (int L = 8; L <= 256; L += 2) {
        worst_end = std::max({worst_end, std::abs(qab_schedule(L, 0.0)), std::abs(qab_schedule(L, 1.0) - 1.0)});
        // d chi/ds = kappa gap(chi)^2 with kappa fixed by chi(0) = 0, chi(1) = 1
        const int n = 20000;
        double integral = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double chi = double(i) / n, g = qab_gap(L, chi);
            integral += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) / (g * g);
        }
        const double kappa = integral / (3.0 * n);
        const double h = 1e-5;
        for (int i = 1; i < 100; ++i) {
            const double s = i / 100.0;
            auto q = [L](double x) { return qab_schedule(L, x); };
            // five-point stencil; the three-point one leaves O(h^2 chi''') ~ 4e-6 at L = 256
            const double dchi = (-q(s + 2 * h) + 8 * q(s + h) - 8 * q(s - h) + q(s - 2 * h)) / (12 * h);
            const double g = qab_gap(L, qab_schedule(L, s));
            worst_ode = std::max(worst_ode, std::abs(dchi - kappa * g * g));
        }
    }
    return {worst_end <= 1e-12 && worst_ode < 1e-6,
            fmt::format("L=8..256 endpoint err={:.1e}, ODE residual={:.1e}", worst_end, worst_ode)};
}

Outcome c10() {
    const OptimizerConfig c = tight(1e-10);
    const auto s80 = LatticeSpec::half_filled(80, -1);
    const auto d80 = boundary_rank_diagnostic(build_dqap_state(s80, optimize(s80, 5, c).params), contiguous_block(0, 40));
    const auto s40 = LatticeSpec::half_filled(40, -1);
    const auto d40 = boundary_rank_diagnostic(build_dqap_state(s40, optimize(s40, 6, c).params), contiguous_block(0, 20));
    return {d80.n_one == 10 && d80.n_zero == 10 && d80.rank == 20 && d80.pairwise_degenerate &&
                !d40.pairwise_degenerate,
            fmt::format("L=80 M=5: n1={} n0={} rank={} pairwise={}; L=40 M=6 pairwise={}", d80.n_one, d80.n_zero,
                        d80.rank, d80.pairwise_degenerate, d40.pairwise_degenerate)};
}

Outcome c11() {
    std::mt19937_64 rng(2024);
    double worst = 0.0, worst_grad = 0.0;
    auto track = [&](double v) { worst = std::max(worst, v); };
    for (int L : {4, 6, 8})
        for (int gamma : {1, -1})
            for (int trial = 0; trial < 4; ++trial) {
                const auto spec = LatticeSpec::half_filled(L, gamma);
                const int N = L / 2;
                const CMatrix h = build_hamiltonian(spec), v1 = build_v1(spec), v2 = build_v2(spec);
                const auto a = testing::random_orthonormal(L, N, rng), b = testing::random_orthonormal(L, N, rng);
                const auto fa = slater_to_fock(a), fb = slater_to_fock(b);
                const cplx ov = fock_inner(fa, fb);
                track(std::abs(overlap(a, b) - ov));
                const CMatrix G = transition_density(a, b);
                for (int x = 0; x < L; ++x)
                    for (int y = 0; y < L; ++y) {
                        track(std::abs(G(y, x) - fock_one_body(fa, fb, x, y) / ov));
                        track(std::abs(two_body_expectation(a, b, x, y, (x + 1) % L, (y + 2) % L) -
                                       fock_two_body(fa, fb, x, y, (x + 1) % L, (y + 2) % L) / ov));
                    }
                track(std::abs(entanglement_entropy(a, contiguous_block(0, N)) - fock_entropy(fa, contiguous_block(0, N))));
                track(std::abs(entanglement_entropy(a, {0, 2}) - fock_entropy(fa, {0, 2})));
                for (auto mode : {TimeMode::Real, TimeMode::Imaginary}) {
                    SlaterState s = a;
                    FockVector f = fa;
                    for (int k = 0; k < 4; ++k) {
                        const double ang = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
                        const Bond bond = generator_of(k);
                        s = apply_bond_layer(s, bond, ang, mode, spec);
                        f = fock_evolve(f, bond == Bond::V1 ? v1 : v2,
                                        mode == TimeMode::Real ? cplx(0.0, ang) : cplx(ang, 0.0));
                    }
                    track(testing::phase_distance(slater_to_fock(s).amp, f.amp) / f.amp.norm());
                }
                const auto p = testing::random_params<DqapParams>(2, rng);
                const RVector g = dqap_energy_gradient(spec, p, h);
                for (int k = 0; k < p.K(); ++k) {
                    RVector hi = p.flatten(), lo = p.flatten();
                    hi(k) += 1e-5;
                    lo(k) -= 1e-5;
                    const double fd = (energy_expectation(build_dqap_state(spec, DqapParams::unflatten(hi)), h) -
                                       energy_expectation(build_dqap_state(spec, DqapParams::unflatten(lo)), h)) /
                                      2e-5;
                    worst_grad = std::max(worst_grad, std::abs(g(k) - fd));
                }
            }
    return {worst <= 1e-10 && worst_grad <= 1e-7,
            fmt::format("max Slater/Fock diff={:.1e}, max gradient/FD diff={:.1e}", worst, worst_grad)};
}

Outcome c12() {
    const auto spec = LatticeSpec::half_filled(24, -1);
    const double ex = exact_energy(spec);
    OptimizerConfig c;
    c.init_mode = InitMode::Random;
    int reached = 0, monotone = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        c.seed = seed;
        const auto r = optimize(spec, 6, c);
        worst = std::max(worst, r.energy - ex);
        reached += r.energy - ex <= 1e-8 * spec.t;
        monotone += is_monotone(r.trace);
    }
    return {reached == 50 && monotone == 50,
            fmt::format("reached {}/50, monotone {}/50, worst dE={:.1e}", reached, monotone, worst)};
}

} // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
        if (!only.empty() && !only.count(n)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s  %s [%.1fs]\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
