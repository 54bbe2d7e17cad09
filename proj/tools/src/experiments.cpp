#include "dqap/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "dqap/adiabatic.hpp"
#include "dqap/entanglement.hpp"

#ifndef DQAP_VERSION
#define DQAP_VERSION "unknown"
#endif

namespace dqap::lab {

namespace {

using json = nlohmann::json;

struct Unit {
    int L = 0;
    std::string boundary;
    std::uint64_t seed = 0;
};

struct UnitResult {
    std::map<std::string, std::vector<std::string>> rows;
    json summary = json::object();
};

struct Context {
    const ExperimentConfig &config;
    const Unit &unit;
    LatticeSpec spec;
    UnitResult &out;
};

std::string cell(double v) { return format_real(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

// every row starts with the full (L, N, gamma, M) context
template <class... Args>
std::string row(const LatticeSpec &s, int M, const Args &...args) {
    std::string r = fmt::format("{},{},{},{}", s.L, s.N, s.gamma, M);
    ((r += ',', r += cell(args)), ...);
    return r;
}

const std::map<Kind, std::vector<std::pair<std::string, std::string>>> &schemas() {
    static const std::map<Kind, std::vector<std::pair<std::string, std::string>>> s = {
        {Kind::EnergySweep,
         {{"energy.csv", "L,N,gamma,M,E,E_exact,dE,dEps,iterations,converged"}}},
        {Kind::EntanglementSweep,
         {{"entanglement.csv", "L,N,gamma,M,L_A,first_site,S,S_exact,E,dE,dEps"},
          {"exponents.csv", "L,N,gamma,M,delta_S,delta_E"}}},
        {Kind::MutualInfo, {{"minfo.csv", "L,N,gamma,M,x,xprime,distance,I"}}},
        {Kind::OrbitalEvolution, {{"orbitals.csv", "L,N,gamma,M,m,column,x,re,im,abs2"}}},
        {Kind::ParamsTrace,
         {{"params.csv", "L,N,gamma,M,seed,m,theta1,theta2"},
          {"trace.csv", "L,N,gamma,M,seed,iteration,E,dE"}}},
        {Kind::Teff, {{"teff.csv", "L,N,gamma,M,T_eff,E,dE,converged"}}},
        {Kind::ImaginarySweep,
         {{"imaginary.csv", "L,N,gamma,M,E,E_exact,dE,distance,beta_bar,iterations,converged"}}},
        {Kind::ContinuousTime,
         {{"eps.csv", "L,N,gamma,M,T,order,epsilon"},
          {"teps.csv", "L,N,gamma,M,target,order,T_eps"}}},
        {Kind::Qab, {{"qab.csv", "L,N,gamma,M,s,chi,gap"}}},
        {Kind::ScheduleOverlap,
         {{"overlap.csv", "L,N,gamma,M,m,chi,alpha,F,chi_alpha1,F_alpha1"}}},
        {Kind::SpectrumDiagnostic,
         {{"spectrum.csv", "L,N,gamma,M,L_A,index,eigenvalue"},
          {"rank.csv", "L,N,gamma,M,L_A,rank,n_zero,n_one,pairwise_degenerate"}}},
    };
    return s;
}

LatticeSpec make_spec(int L, const std::string &boundary) {
    if (boundary == "pbc") return LatticeSpec::half_filled(L, 1);
    if (boundary == "apbc") return LatticeSpec::half_filled(L, -1);
    return LatticeSpec::closed_shell(L);
}

std::vector<double> real_list(const json &params, const char *key, std::vector<double> fallback) {
    if (!params.contains(key)) return fallback;
    const auto &v = params.at(key);
    if (v.is_number()) return {v.get<double>()};
    std::vector<double> out;
    for (const auto &x : v) out.push_back(x.get<double>());
    if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    return out;
}

struct SeriesPoint {
    int M = 0;
    OptResult<DqapParams> result;
};

// Optimized parameters for each requested M. Warm start chains M = 1, 2, ...
// and keeps the requested depths; other modes optimize each M independently.
std::vector<SeriesPoint> optimize_series(const LatticeSpec &spec, std::vector<int> Ms,
                                         const OptimizerConfig &cfg) {
    std::sort(Ms.begin(), Ms.end());
    Ms.erase(std::unique(Ms.begin(), Ms.end()), Ms.end());
    std::vector<SeriesPoint> out;
    if (cfg.init_mode != InitMode::WarmStart) {
        for (int M : Ms) out.push_back({M, optimize(spec, M, cfg)});
        return out;
    }
    const std::set<int> wanted(Ms.begin(), Ms.end());
    if (wanted.count(0)) {
        OptimizerConfig c0 = cfg;
        c0.init_mode = InitMode::LinearSchedule;
        out.push_back({0, optimize(spec, 0, c0)});
    }
    DqapParams prev;
    for (int M = 1; M <= Ms.back(); ++M) {
        OptimizerConfig c = cfg;
        if (M == 1) c.init_mode = InitMode::LinearSchedule;
        auto r = optimize(spec, M, c, M == 1 ? nullptr : &prev);
        prev = r.params;
        if (wanted.count(M)) out.push_back({M, std::move(r)});
    }
    return out;
}

json summarize(int M, const OptResult<DqapParams> &r) {
    return {{"M", M}, {"energy", r.energy}, {"iterations", r.iterations}, {"converged", r.converged}};
}

double eps_inf(const LatticeSpec &s) { return -2.0 * s.t / std::numbers::pi; }

Subsystem block_for(const Context &ctx) {
    const int L_A = ctx.config.params.value("L_A", ctx.spec.L / 2);
    const int first = ctx.config.params.value("first_site", 0);
    Subsystem A = contiguous_block(first, L_A);
    validate_subsystem(A, ctx.spec.L);
    return A;
}

void run_energy_sweep(Context &ctx) {
    const double ex = exact_ground_state(ctx.spec).energy;
    json runs = json::array();
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, ctx.config.optimizer)) {
        const auto &r = p.result;
        ctx.out.rows["energy.csv"].push_back(row(ctx.spec, p.M, r.energy, ex, r.energy - ex,
                                                 r.energy / ctx.spec.L - eps_inf(ctx.spec),
                                                 r.iterations, r.converged));
        runs.push_back(summarize(p.M, r));
    }
    ctx.out.summary["results"] = runs;
}

void run_entanglement_sweep(Context &ctx) {
    const Subsystem A = block_for(ctx);
    const GroundState gs = exact_ground_state(ctx.spec);
    const double S_exact = entanglement_entropy(gs.state, A);
    json runs = json::array();
    std::map<int, std::pair<double, double>> by_M; // M -> (S, dEps)
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, ctx.config.optimizer)) {
        const auto &r = p.result;
        const double S = entanglement_entropy(build_dqap_state(ctx.spec, r.params), A);
        const double deps = r.energy / ctx.spec.L - eps_inf(ctx.spec);
        ctx.out.rows["entanglement.csv"].push_back(row(ctx.spec, p.M, static_cast<int>(A.size()),
                                                       A.front(), S, S_exact, r.energy,
                                                       r.energy - gs.energy, deps));
        by_M[p.M] = {S, deps};
        runs.push_back(summarize(p.M, r));
    }
    for (const auto &[M, v] : by_M) {
        auto next = by_M.find(M + 1);
        if (M < 1 || next == by_M.end()) continue;
        const double dS = entropy_exponents(M, {v.first, next->second.first})[0];
        double dE = std::nan("");
        if (v.second > 0.0 && next->second.second > 0.0)
            dE = energy_exponents(M, {v.second, next->second.second})[0];
        ctx.out.rows["exponents.csv"].push_back(row(ctx.spec, M, dS, dE));
    }
    ctx.out.summary["results"] = runs;
}

void run_mutual_info(Context &ctx) {
    json runs = json::array();
    const int L = ctx.spec.L;
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, ctx.config.optimizer)) {
        const SlaterState st = build_dqap_state(ctx.spec, p.result.params);
        for (int x = 0; x < L; ++x)
            for (int xp = x + 1; xp < L; ++xp) {
                const int d = std::min(xp - x, L - (xp - x));
                ctx.out.rows["minfo.csv"].push_back(
                    row(ctx.spec, p.M, x, xp, d, mutual_information(st, x, xp)));
            }
        runs.push_back(summarize(p.M, p.result));
    }
    ctx.out.summary["results"] = runs;
}

void run_orbital_evolution(Context &ctx) {
    const int column = ctx.config.params.value("column", 0);
    if (column < 0 || column >= ctx.spec.N) throw ConfigError("params.column out of range");
    json runs = json::array();
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, ctx.config.optimizer)) {
        const auto states = intermediate_states(ctx.spec, p.result.params);
        for (size_t m = 0; m < states.size(); ++m) {
            const auto &o = states[m].orbitals;
            for (int x = 0; x < ctx.spec.L; ++x) {
                const cplx a = o(x, column);
                ctx.out.rows["orbitals.csv"].push_back(row(ctx.spec, p.M, static_cast<int>(m),
                                                           column, x, a.real(), a.imag(),
                                                           std::norm(a)));
            }
        }
        runs.push_back(summarize(p.M, p.result));
    }
    ctx.out.summary["results"] = runs;
}

void run_params_trace(Context &ctx) {
    OptimizerConfig cfg = ctx.config.optimizer;
    cfg.seed = ctx.unit.seed;
    cfg.keep_trace = true;
    const double ex = exact_ground_state(ctx.spec).energy;
    json runs = json::array();
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, cfg)) {
        const auto &r = p.result;
        for (int m = 0; m < r.params.M(); ++m)
            ctx.out.rows["params.csv"].push_back(row(ctx.spec, p.M, ctx.unit.seed, m + 1,
                                                     r.params.layers[m].v1, r.params.layers[m].v2));
        for (size_t i = 0; i < r.trace.size(); ++i)
            ctx.out.rows["trace.csv"].push_back(row(ctx.spec, p.M, ctx.unit.seed,
                                                    static_cast<int>(i), r.trace[i], r.trace[i] - ex));
        json s = summarize(p.M, r);
        s["monotone"] = is_monotone(r.trace);
        runs.push_back(s);
    }
    ctx.out.summary["results"] = runs;
}

void run_teff(Context &ctx) {
    const std::vector<int> Ms =
        ctx.config.M.empty() ? std::vector<int>{lieb_robinson_depth(ctx.spec.L)} : ctx.config.M;
    const double ex = exact_ground_state(ctx.spec).energy;
    json runs = json::array();
    for (const auto &p : optimize_series(ctx.spec, Ms, ctx.config.optimizer)) {
        const auto &r = p.result;
        ctx.out.rows["teff.csv"].push_back(
            row(ctx.spec, p.M, aggregate_times(r.params), r.energy, r.energy - ex, r.converged));
        runs.push_back(summarize(p.M, r));
    }
    ctx.out.summary["results"] = runs;
}

void run_imaginary_sweep(Context &ctx) {
    const GroundState gs = exact_ground_state(ctx.spec);
    json runs = json::array();
    std::vector<int> Ms = ctx.config.M;
    std::sort(Ms.begin(), Ms.end());
    for (int M : Ms) {
        const auto r = optimize_imaginary(ctx.spec, M, ctx.config.optimizer);
        const SlaterState st = build_imag_state(ctx.spec, r.params);
        const double ov = std::abs(overlap(gs.state, st));
        const double norm2 = std::abs(overlap(st, st));
        const double d = std::sqrt(std::max(0.0, 1.0 - ov * ov / norm2));
        ctx.out.rows["imaginary.csv"].push_back(row(ctx.spec, M, r.energy, gs.energy,
                                                    r.energy - gs.energy, d,
                                                    aggregate_times(r.params), r.iterations,
                                                    r.converged));
        runs.push_back({{"M", M}, {"energy", r.energy}, {"iterations", r.iterations},
                        {"converged", r.converged}});
    }
    ctx.out.summary["results"] = runs;
}

void run_continuous_time(Context &ctx) {
    const auto &pp = ctx.config.params;
    const int order = pp.value("order", 1);
    const double max_step = pp.value("max_step", 0.01) / ctx.spec.t;
    const auto Ts = real_list(pp, "T", {1, 2, 5, 10, 20, 50, 100, 200});
    const auto targets = real_list(pp, "targets", {0.01});
    for (double T : Ts) {
        if (T < 0.0) throw ConfigError("params.T must be non-negative");
        const EvolutionPlan plan =
            T > 0.0 ? EvolutionPlan::with_max_step(T, max_step, order) : EvolutionPlan{0.0, 0, order};
        ctx.out.rows["eps.csv"].push_back(
            row(ctx.spec, plan.M, T, order, linear_schedule_error(ctx.spec, plan)));
    }
    json teps = json::array();
    for (double target : targets) {
        const double T = find_T_epsilon(ctx.spec, target, max_step, 1e5, order);
        const int steps = T > 0.0 ? EvolutionPlan::with_max_step(T, max_step, order).M : 0;
        ctx.out.rows["teps.csv"].push_back(row(ctx.spec, steps, target, order, T));
        teps.push_back({{"target", target}, {"T_eps", T}});
    }
    ctx.out.summary["T_eps"] = teps;
}

void run_qab(Context &ctx) {
    const int samples = ctx.config.params.value("samples", 1001);
    if (samples < 2) throw ConfigError("params.samples must be >= 2");
    for (int i = 0; i < samples; ++i) {
        const double s = static_cast<double>(i) / (samples - 1);
        const double chi = qab_schedule(ctx.spec.L, s);
        ctx.out.rows["qab.csv"].push_back(
            row(ctx.spec, 0, s, chi, qab_gap(ctx.spec.L, chi, ctx.spec.t)));
    }
}

void run_schedule_overlap(Context &ctx) {
    json runs = json::array();
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, ctx.config.optimizer)) {
        std::vector<int> ms;
        if (ctx.config.params.contains("m"))
            ms = ctx.config.params.at("m").get<std::vector<int>>();
        else
            for (int m = 1; m <= p.M; ++m) ms.push_back(m);
        for (int m : ms) {
            if (m < 0 || m > p.M) continue;
            const auto free = maximize_overlap(ctx.spec, p.result.params, m);
            const auto fixed = maximize_overlap(ctx.spec, p.result.params, m, 1.0);
            ctx.out.rows["overlap.csv"].push_back(
                row(ctx.spec, p.M, m, free.chi, free.alpha, free.F, fixed.chi, fixed.F));
        }
        runs.push_back(summarize(p.M, p.result));
    }
    ctx.out.summary["results"] = runs;
}

void run_spectrum_diagnostic(Context &ctx) {
    const Subsystem A = block_for(ctx);
    json runs = json::array();
    for (const auto &p : optimize_series(ctx.spec, ctx.config.M, ctx.config.optimizer)) {
        const auto d = boundary_rank_diagnostic(build_dqap_state(ctx.spec, p.result.params), A);
        const int LA = static_cast<int>(A.size());
        for (Eigen::Index i = 0; i < d.spectrum.size(); ++i)
            ctx.out.rows["spectrum.csv"].push_back(
                row(ctx.spec, p.M, LA, static_cast<int>(i), d.spectrum(i)));
        ctx.out.rows["rank.csv"].push_back(
            row(ctx.spec, p.M, LA, d.rank, d.n_zero, d.n_one, d.pairwise_degenerate));
        runs.push_back(summarize(p.M, p.result));
    }
    ctx.out.summary["results"] = runs;
}

void run_unit(Context &ctx) {
    switch (ctx.config.kind) {
    case Kind::EnergySweep: return run_energy_sweep(ctx);
    case Kind::EntanglementSweep: return run_entanglement_sweep(ctx);
    case Kind::MutualInfo: return run_mutual_info(ctx);
    case Kind::OrbitalEvolution: return run_orbital_evolution(ctx);
    case Kind::ParamsTrace: return run_params_trace(ctx);
    case Kind::Teff: return run_teff(ctx);
    case Kind::ImaginarySweep: return run_imaginary_sweep(ctx);
    case Kind::ContinuousTime: return run_continuous_time(ctx);
    case Kind::Qab: return run_qab(ctx);
    case Kind::ScheduleOverlap: return run_schedule_overlap(ctx);
    case Kind::SpectrumDiagnostic: return run_spectrum_diagnostic(ctx);
    }
}

std::vector<Unit> expand_units(const ExperimentConfig &c) {
    std::vector<Unit> units;
    const int seeds = c.kind == Kind::ParamsTrace ? c.params.value("seeds", 1) : 1;
    if (seeds < 1) throw ConfigError("params.seeds must be >= 1");
    for (int L : c.L)
        for (const auto &b : c.boundary)
            for (int s = 0; s < seeds; ++s) units.push_back({L, b, c.seed + static_cast<std::uint64_t>(s)});
    return units;
}

// fits the first numeric result column of `file` against L, when there are enough sizes
json size_fit(const std::vector<Unit> &units, const std::vector<UnitResult> &results,
              const std::vector<char> &ok, const std::string &file, int column) {
    std::vector<double> x, y;
    for (size_t i = 0; i < units.size(); ++i) {
        if (!ok[i]) continue;
        auto it = results[i].rows.find(file);
        if (it == results[i].rows.end() || it->second.empty()) continue;
        const std::string &r = it->second.front();
        size_t pos = 0;
        for (int c = 0; c < column; ++c) pos = r.find(',', pos) + 1;
        x.push_back(units[i].L);
        y.push_back(std::stod(r.substr(pos, r.find(',', pos) - pos)));
    }
    if (x.size() < 3) return nullptr;
    try {
        const auto f = fit_power_law(x, y);
        return {{"file", file}, {"exponent", f.exponent}, {"stderr", f.stderr_exponent}, {"points", f.points}};
    } catch (const Error &) {
        return nullptr;
    }
}

} // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.16e}", v);
}

RunReport run_experiment(const ExperimentConfig &config, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Unit> units = expand_units(config);
    std::vector<UnitResult> results(units.size());
    std::vector<char> ok(units.size(), 0);
    std::vector<std::string> errors(units.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < units.size(); i = next++) {
            try {
                Context ctx{config, units[i], make_spec(units[i].L, units[i].boundary), results[i]};
                run_unit(ctx);
                ok[i] = 1;
            } catch (const std::exception &e) {
                errors[i] = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(units.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    namespace fs = std::filesystem;
    fs::create_directories(config.out);
    RunReport report;
    for (const auto &[file, header] : schemas().at(config.kind)) {
        const fs::path path = fs::path(config.out) / file;
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot write '" + path.string() + "'");
        os << header << '\n';
        // partial rows of failed runs are kept
        for (const auto &r : results) {
            auto it = r.rows.find(file);
            if (it == r.rows.end()) continue;
            for (const auto &line : it->second) os << line << '\n';
        }
        report.files.push_back(path.string());
    }

    json runs = json::array();
    for (size_t i = 0; i < units.size(); ++i) {
        json r = {{"L", units[i].L}, {"boundary", units[i].boundary}, {"seed", units[i].seed}};
        r["status"] = ok[i] ? "ok" : "error";
        if (!ok[i]) {
            r["error"] = errors[i];
            ++report.failures;
        }
        r.update(results[i].summary);
        runs.push_back(r);
    }
    json manifest = {{"config", config.raw},
                     {"version", DQAP_VERSION},
                     {"jobs", n_threads},
                     {"files", report.files},
                     {"runs", runs},
                     {"failures", report.failures}};
    manifest["config"]["out"] = config.out;
    manifest["config"]["seed"] = config.seed;
    if (config.kind == Kind::Teff) manifest["fit_T_eff_vs_L"] = size_fit(units, results, ok, "teff.csv", 4);
    if (config.kind == Kind::ContinuousTime)
        manifest["fit_T_eps_vs_L"] = size_fit(units, results, ok, "teps.csv", 6);
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream ms(fs::path(config.out) / "manifest.json");
    ms << manifest.dump(2) << '\n';
    report.manifest = std::move(manifest);
    return report;
}

} // namespace dqap::lab
