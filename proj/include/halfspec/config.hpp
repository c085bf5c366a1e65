#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfspec/params.hpp"

namespace halfspec {

/// Parsed run configuration.  Unknown keys are rejected at parse time; every
/// default here is what the CLI --help documents.
struct ConfigFile {
    ModelParams params;
    bool any_param_given = false;
    bool heuristic_init = false;        // "init": "heuristic"
    std::vector<std::string> freeze;
    std::optional<std::vector<double>> sites;  // altitude subset for --data columns
    int pad_factor = 7;
    double time_delta = 0.0;  // 0: integer time indices required
    int probes = 72;
    std::uint64_t seed = 0;
    double tolerance = 1e-6;
    int max_iterations = 200;
    double initial_radius = 1.0;
    double max_radius = 100.0;
    int n_lags = 0;                     // 0: derive from the layout
    int n_reps = 1;
    int n_tapers = 5;
    std::optional<std::int64_t> n_time; // simulate/kernel-dump without --data
    std::vector<std::pair<int, int>> pairs;  // site-index pairs for diagnostics
    std::vector<std::string> grad_params;    // kernel-dump derivative columns
};

ConfigFile parse_config_string(const std::string& text);
ConfigFile parse_config_file(const std::filesystem::path& path);

}  // namespace halfspec
