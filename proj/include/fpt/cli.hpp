#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fpt::cli {

enum class OutputFormat { csv, json };

/// Parsed command line shared by all subcommands.
struct RunConfig {
    std::string command;
    std::string boundary_path;
    std::string method = "girsanov_mc";
    std::optional<double> s;
    std::optional<double> t_max;
    int points = 0;  // 0: subcommand default
    std::optional<long long> n_paths;
    std::optional<int> n_steps;
    int n_t = 1000;
    int n_x = 1000;
    std::uint64_t seed = 0;
    std::string output_path;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    // bridge
    double a = 1.0;
    std::string mode = "moments";
    std::string scheme = "three_bridge";
    std::vector<double> u_values;

    // bounds
    std::string check_curve;
    double tolerance = 0.005;

    // validate
    std::string scale = "default";
};

/// Exit codes: 0 success, 1 failed validation or envelope check, 2 invalid
/// configuration or input, 3 numerical failure.
int cmd_density(const RunConfig& config, std::ostream& out);
int cmd_validate(const RunConfig& config, std::ostream& out);
int cmd_bridge(const RunConfig& config, std::ostream& out);
int cmd_bounds(const RunConfig& config, std::ostream& out);

/// Parses argv, dispatches, and maps errors to exit codes; diagnostics go
/// to `err` prefixed with the error name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpt::cli
