#pragma once

#include "helmdual/concentration.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace helmdual::cli {

/// Declarative run configuration (JSON, versioned, unknown keys rejected).
struct RunConfig {
    enum class Mode { Solve, Sweep, Selftest } mode = Mode::Solve;
    int dimension = 3;
    double p = 5.0;
    double q = 5.0;
    Grid grid;
    double delta = 0.0;            // 0 => plan default
    CoefficientSpec P;
    CoefficientSpec Q;
    SolverConfig solver;
    // sweep-only
    std::vector<double> eps_list;
    double rho = 0.0;
    int multistart = 1;

    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;
    nlohmann::json echo;           // parsed config for the manifest
};

/// Parse + schema-validate. Throws ConfigError (including the exponent
/// module's RegionViolation reason codes for inadmissible exponents).
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_json(const nlohmann::json& j);

/// Execute a parsed config; writes manifest/fields/CSVs under output_dir.
/// Returns the process exit code: 0 full convergence, 2 partial, 1 config
/// or I/O error.
int run_config(const RunConfig& cfg, std::ostream& out);

/// Convenience wrapper: parse + run; config errors map to exit code 1.
int run(const std::filesystem::path& config_path, std::ostream& out,
        std::optional<std::filesystem::path> output_override = {},
        std::optional<int> threads_override = {});

/// Invariant battery (operator symmetry, gradient check, Nehari identities,
/// multiplier algebra, quadrature/shift exactness). Prints one line per
/// property; returns true iff all pass. `quick` shrinks the grids.
bool selftest(std::ostream& out, bool quick);

/// Plot-ready CSV emission for a finished sweep.
void emit_plot_data(const ConcentrationReport& rep, const std::filesystem::path& output_dir);

} // namespace helmdual::cli
