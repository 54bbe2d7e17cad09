#include "dqap/lab.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

namespace dqap::lab {

namespace {

const std::vector<std::pair<Kind, std::string>> kKindNames = {
    {Kind::EnergySweep, "energy-sweep"},
    {Kind::EntanglementSweep, "entanglement-sweep"},
    {Kind::MutualInfo, "mutual-info"},
    {Kind::OrbitalEvolution, "orbital-evolution"},
    {Kind::ParamsTrace, "params-trace"},
    {Kind::Teff, "teff"},
    {Kind::ImaginarySweep, "imaginary-sweep"},
    {Kind::ContinuousTime, "continuous-time"},
    {Kind::Qab, "qab"},
    {Kind::ScheduleOverlap, "schedule-overlap"},
    {Kind::SpectrumDiagnostic, "spectrum-diagnostic"},
};

// [a, b, ...] or {"from": a, "to": b} (inclusive)
std::vector<int> int_range(const nlohmann::json &j, const char *key) {
    std::vector<int> out;
    if (j.is_number_integer()) {
        out.push_back(j.get<int>());
    } else if (j.is_array()) {
        for (const auto &v : j) {
            if (!v.is_number_integer()) throw ConfigError(std::string(key) + ": expected integers");
            out.push_back(v.get<int>());
        }
    } else if (j.is_object()) {
        if (!j.contains("from") || !j.contains("to"))
            throw ConfigError(std::string(key) + ": range objects need 'from' and 'to'");
        const int a = j.at("from").get<int>(), b = j.at("to").get<int>();
        const int step = j.value("step", 1);
        if (step < 1 || b < a) throw ConfigError(std::string(key) + ": empty or backwards range");
        for (int v = a; v <= b; v += step) out.push_back(v);
    } else {
        throw ConfigError(std::string(key) + ": expected a list or a range object");
    }
    if (out.empty()) throw ConfigError(std::string(key) + ": empty range");
    return out;
}

InitMode parse_init(const std::string &s) {
    if (s == "linear") return InitMode::LinearSchedule;
    if (s == "warm") return InitMode::WarmStart;
    if (s == "random") return InitMode::Random;
    if (s == "zeros") return InitMode::ZerosNoise;
    throw ConfigError("unknown init mode '" + s + "' (linear, warm, random, zeros)");
}

MetricBackend parse_backend(const std::string &s) {
    if (s == "auto") return MetricBackend::Auto;
    if (s == "general") return MetricBackend::General;
    if (s == "translation") return MetricBackend::Translation;
    throw ConfigError("unknown metric backend '" + s + "'");
}

OptimizerConfig parse_optimizer(const nlohmann::json &j, Kind kind) {
    OptimizerConfig c =
        kind == Kind::ImaginarySweep ? OptimizerConfig::imaginary_defaults() : OptimizerConfig{};
    // both read off the systematic branch grown one layer at a time
    if (kind == Kind::Teff || kind == Kind::ScheduleOverlap) c.init_mode = InitMode::WarmStart;
    if (j.is_null()) return c;
    if (!j.is_object()) throw ConfigError("optimizer: expected an object");
    for (const auto &[key, v] : j.items()) {
        if (key == "max_iters")
            c.max_iters = v.get<int>();
        else if (key == "energy_tol")
            c.energy_tol = v.get<double>();
        else if (key == "param_tol")
            c.param_tol = v.get<double>();
        else if (key == "ridge")
            c.ridge = v.get<double>();
        else if (key == "delta_beta")
            c.delta_beta = v.get<double>();
        else if (key == "init")
            c.init_mode = parse_init(v.get<std::string>());
        else if (key == "noise")
            c.noise = v.get<double>();
        else if (key == "backend")
            c.backend = parse_backend(v.get<std::string>());
        else
            throw ConfigError("optimizer: unknown key '" + key + "'");
    }
    if (c.max_iters < 1 || !(c.energy_tol > 0.0) || c.ridge < 0.0 || !(c.delta_beta > 0.0))
        throw ConfigError("optimizer: max_iters >= 1, energy_tol > 0, ridge >= 0, delta_beta > 0");
    return c;
}

bool needs_layers(Kind k) {
    return k != Kind::Teff && k != Kind::ContinuousTime && k != Kind::Qab;
}

} // namespace

const std::vector<Kind> &all_kinds() {
    static const std::vector<Kind> kinds = [] {
        std::vector<Kind> v;
        for (const auto &[k, n] : kKindNames) v.push_back(k);
        return v;
    }();
    return kinds;
}

std::string kind_name(Kind k) {
    for (const auto &[kk, n] : kKindNames)
        if (kk == k) return n;
    return "unknown";
}

Kind parse_kind(const std::string &name) {
    for (const auto &[k, n] : kKindNames)
        if (n == name) return k;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

ExperimentConfig parse_config(const nlohmann::json &j, std::optional<Kind> expected) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.raw = j;
    try {
        if (j.contains("kind")) {
            c.kind = parse_kind(j.at("kind").get<std::string>());
            if (expected && *expected != c.kind)
                throw ConfigError("config kind '" + kind_name(c.kind) + "' does not match '" +
                                  kind_name(*expected) + "'");
        } else if (expected) {
            c.kind = *expected;
        } else {
            throw ConfigError("config needs a 'kind'");
        }
        c.raw["kind"] = kind_name(c.kind);
        if (!j.contains("L")) throw ConfigError("config needs 'L'");
        c.L = int_range(j.at("L"), "L");
        if (j.contains("M"))
            c.M = int_range(j.at("M"), "M");
        else if (needs_layers(c.kind))
            throw ConfigError("config needs 'M' for " + kind_name(c.kind));
        if (j.contains("boundary")) {
            c.boundary.clear();
            const auto &b = j.at("boundary");
            if (b.is_string())
                c.boundary.push_back(b.get<std::string>());
            else
                for (const auto &v : b) c.boundary.push_back(v.get<std::string>());
            if (c.boundary.empty()) throw ConfigError("boundary: empty list");
            for (const auto &s : c.boundary)
                if (s != "pbc" && s != "apbc" && s != "closed-shell")
                    throw ConfigError("boundary: '" + s + "' is not pbc, apbc or closed-shell");
        }
        c.optimizer = parse_optimizer(j.value("optimizer", nlohmann::json()), c.kind);
        c.out = j.value("out", c.out);
        c.seed = j.value("seed", std::uint64_t{0});
        c.optimizer.seed = c.seed;
        c.params = j.value("params", nlohmann::json::object());
        if (!c.params.is_object()) throw ConfigError("params: expected an object");
        for (const auto &[key, v] : j.items())
            if (key != "kind" && key != "L" && key != "M" && key != "boundary" &&
                key != "optimizer" && key != "out" && key != "seed" && key != "params")
                throw ConfigError("unknown top-level key '" + key + "'");
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    for (int L : c.L)
        if (L < 2 || L % 2 != 0) throw ConfigError("L must be even and >= 2");
    for (int M : c.M)
        if (M < 0) throw ConfigError("M must be non-negative");
    return c;
}

ExperimentConfig load_config(const std::string &path, std::optional<Kind> expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    return parse_config(j, expected);
}

int resolve_jobs(std::optional<int> flag) {
    if (flag) {
        if (*flag < 1) throw ConfigError("--jobs must be >= 1");
        return *flag;
    }
    if (const char *env = std::getenv("DQAP_JOBS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw ConfigError("DQAP_JOBS must be a positive integer");
        return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace dqap::lab
