#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqap/optimizer.hpp"

namespace dqap::lab {

struct ConfigError : Error {
    using Error::Error;
};

enum class Kind {
    EnergySweep,
    EntanglementSweep,
    MutualInfo,
    OrbitalEvolution,
    ParamsTrace,
    Teff,
    ImaginarySweep,
    ContinuousTime,
    Qab,
    ScheduleOverlap,
    SpectrumDiagnostic
};

const std::vector<Kind> &all_kinds();
std::string kind_name(Kind k);
Kind parse_kind(const std::string &name);

struct ExperimentConfig {
    Kind kind = Kind::EnergySweep;
    std::vector<int> L;
    std::vector<int> M;
    std::vector<std::string> boundary{"closed-shell"}; // pbc | apbc | closed-shell
    OptimizerConfig optimizer;
    std::string out = "results";
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object(); // kind-specific keys
    nlohmann::json raw;                                // echoed into the manifest
};

// `kind` may be omitted when the caller already knows it (CLI subcommand).
ExperimentConfig parse_config(const nlohmann::json &j, std::optional<Kind> expected = std::nullopt);
ExperimentConfig load_config(const std::string &path, std::optional<Kind> expected = std::nullopt);

// --jobs wins, then DQAP_JOBS, then hardware concurrency
int resolve_jobs(std::optional<int> flag);

struct RunReport {
    int failures = 0;
    std::vector<std::string> files;
    nlohmann::json manifest;
};

// Writes the CSVs and manifest.json into config.out. Failed runs are recorded
// in the manifest; their siblings still run.
RunReport run_experiment(const ExperimentConfig &config, int jobs = 1);

struct PowerLawFit {
    double exponent = 0.0;
    double stderr_exponent = 0.0;
    double log_prefactor = 0.0;
    int points = 0;
};

PowerLawFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y);
PowerLawFit fit_power_law_csv(const std::string &path, const std::string &x_column,
                              const std::string &y_column);

// 17 significant digits, scientific
std::string format_real(double v);

} // namespace dqap::lab
