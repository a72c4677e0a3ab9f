// Experiment registry: Monte Carlo probes of frozen-percolation behavior,
// each producing one CSV row per (replica, grid point) plus a JSON summary.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frozenperc/frozen.hpp"

namespace frozenperc {

struct ExperimentResult {
    std::string name;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json summary = nlohmann::json::object();
    nlohmann::json seed_manifest = nlohmann::json::object();
    double wall_seconds = 0.0;

    std::string csv() const;
    /// {name, config, summary, seed_manifest, wall_seconds}
    nlohmann::json summary_json() const;
    /// Writes <dir>/<name>.csv and <dir>/<name>.json.
    void write(const std::filesystem::path& dir) const;
};

struct ExperimentOptions {
    std::int64_t replicas = 100;
    std::uint64_t base_seed = 1;
    /// Radius of the simulated box; 0 selects 4N.
    double domain_radius = 0.0;
    unsigned workers = 0;
};

struct Variant {
    SizeRule size_rule;
    BoundaryRule boundary_rule;
};

std::vector<Variant> all_variants();

/// Original diameter rule. Records the freeze times of every frozen cluster
/// meeting B_{K N}; per lambda, the fraction of replicas where one of them lies
/// outside [p_{-lambda}(N), p_{lambda}(N)]. pi4(N) is estimated unless given.
ExperimentResult exp_freeze_time_window(double n, double k, const std::vector<double>& lambdas,
                                        const ExperimentOptions& options,
                                        std::optional<double> pi4_hat = std::nullopt,
                                        std::int64_t pi4_replicas = 200);

/// P(origin freezes) for each variant on matched seeds, with the histogram of
/// origin freeze times under the modified diameter rule.
ExperimentResult exp_origin_freeze(double n, const std::vector<Variant>& variants,
                                   const ExperimentOptions& options);

/// Diameter rule. Distribution of diam(C_1(0)) / N and, per epsilon, the
/// fraction of replicas with the ratio in [epsilon, 1 - epsilon].
ExperimentResult exp_macro_cluster(double n, const std::vector<double>& epsilons, BoundaryRule rule,
                                   const ExperimentOptions& options);

/// Volume rule restricted to B_m for each m of the grid: P(origin freezes).
ExperimentResult exp_volume_scale_scan(double n, const std::vector<double>& radii, BoundaryRule rule,
                                       const ExperimentOptions& options);

/// Wilson score interval for a binomial proportion at 95%.
std::pair<double, double> wilson_interval(double successes, double trials);

}  // namespace frozenperc
