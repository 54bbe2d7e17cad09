#include <cstdio>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dqap/fock.hpp"
#include "dqap/lab.hpp"

namespace {

using namespace dqap;

// Slater route against the Fock oracle for one random DQAP state.
int run_oracle(int L, int gamma, int M, std::uint64_t seed) {
    const LatticeSpec spec = LatticeSpec::half_filled(L, gamma);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DqapParams p;
    p.layers.resize(M);
    for (auto &lp : p.layers) lp = {u(rng), u(rng)};
    const SlaterState st = build_dqap_state(spec, p);
    const FockVector fv = slater_to_fock(st);
    const CMatrix h = build_hamiltonian(spec);

    const double e_slater = energy_expectation(st, h);
    const double e_fock = std::real(fock_inner(fv, fock_apply_hamiltonian(fv, h)));
    double one_body = 0.0;
    const CMatrix P = occupied_projector(st);
    for (int x = 0; x < L; ++x)
        for (int xp = 0; xp < L; ++xp)
            one_body = std::max(one_body, std::abs(P(xp, x) - fock_one_body(fv, fv, x, xp)));
    const Subsystem A = contiguous_block(0, L / 2);
    const double s_slater = entanglement_entropy(st, A);
    const double s_fock = fock_entropy(fv, A);

    fmt::print("L={} N={} gamma={} M={} seed={} dim={}\n", L, spec.N, gamma, M, seed, fv.basis->size());
    fmt::print("energy    slater={:.16e} fock={:.16e} diff={:.3e}\n", e_slater, e_fock,
               std::abs(e_slater - e_fock));
    fmt::print("one-body  max|diff|={:.3e}\n", one_body);
    fmt::print("entropy   slater={:.16e} fock={:.16e} diff={:.3e}\n", s_slater, s_fock,
               std::abs(s_slater - s_fock));
    const double worst = std::max({std::abs(e_slater - e_fock), one_body, std::abs(s_slater - s_fock)});
    return worst < 1e-10 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"DQAP simulator and optimizer for the 1D free-fermion chain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DQAP_VERSION);

    struct ExperimentArgs {
        std::string config;
        std::optional<int> jobs;
        std::optional<std::string> out;
        std::optional<std::uint64_t> seed;
    };
    std::vector<std::pair<dqap::lab::Kind, CLI::App *>> experiment_cmds;
    ExperimentArgs ea;
    for (auto kind : dqap::lab::all_kinds()) {
        auto *cmd = app.add_subcommand(dqap::lab::kind_name(kind), "run the " +
                                                                      dqap::lab::kind_name(kind) +
                                                                      " experiment");
        cmd->add_option("--config", ea.config, "JSON config file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--jobs", ea.jobs, "worker threads (default: DQAP_JOBS or all cores)");
        cmd->add_option("--out", ea.out, "output directory (overrides the config)");
        cmd->add_option("--seed", ea.seed, "seed (overrides the config)");
        experiment_cmds.emplace_back(kind, cmd);
    }

    std::string csv, xcol = "L", ycol;
    auto *fit = app.add_subcommand("fit", "least-squares power law y ~ x^a from two CSV columns");
    fit->add_option("--csv", csv, "CSV file")->required()->check(CLI::ExistingFile);
    fit->add_option("--x", xcol, "x column")->capture_default_str();
    fit->add_option("--y", ycol, "y column")->required();

    int oL = 6, ogamma = -1, oM = 2;
    std::uint64_t oseed = 0;
    auto *oracle = app.add_subcommand("oracle", "compare Slater and Fock results for a random state");
    oracle->add_option("--L", oL, "sites (<= 14)")->capture_default_str();
    oracle->add_option("--gamma", ogamma, "+1 periodic, -1 antiperiodic")->capture_default_str();
    oracle->add_option("--M", oM, "layers")->capture_default_str();
    oracle->add_option("--seed", oseed, "seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto &[kind, cmd] : experiment_cmds) {
            if (!cmd->parsed()) continue;
            auto config = dqap::lab::load_config(ea.config, kind);
            if (ea.out) config.out = *ea.out;
            if (ea.seed) {
                config.seed = *ea.seed;
                config.optimizer.seed = *ea.seed;
            }
            const int jobs = dqap::lab::resolve_jobs(ea.jobs);
            const auto report = dqap::lab::run_experiment(config, jobs);
            for (const auto &f : report.files) fmt::print("wrote {}\n", f);
            if (report.failures > 0) {
                for (const auto &r : report.manifest["runs"])
                    if (r["status"] == "error")
                        fmt::print(stderr, "error: L={} boundary={}: {}\n", r["L"].get<int>(),
                                   r["boundary"].get<std::string>(), r["error"].get<std::string>());
                return 1;
            }
            return 0;
        }
        if (fit->parsed()) {
            const auto f = dqap::lab::fit_power_law_csv(csv, xcol, ycol);
            fmt::print("exponent {:.6f} +/- {:.6f} ({} points)\n", f.exponent, f.stderr_exponent, f.points);
            return 0;
        }
        if (oracle->parsed()) return run_oracle(oL, ogamma, oM, oseed);
    } catch (const dqap::lab::ConfigError &e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
