#pragma once

#include <stdexcept>
#include <string>

namespace wplab {

/// Raised for malformed configuration input; the CLI maps it to its own
/// config-error exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario parameters with their documented defaults. t_max = 0 means
/// "auto": use the step bound computed by the metric family.
struct ScenarioConfig {
    int genus = 2;
    int cover_degree = 2;
    int refine = 3;
    int q_seed = 0;
    int q_truncation = 6;
    double t_max = 0.0;
    int grid_points = 5;
    double solver_tol = 1e-8;
    int solver_max_iter = 20000;
    double kernel_kappa = 1e-10;
    unsigned seed = 0;
    std::string out_dir = "out";
};

/// Parse key=value lines ('#' starts a comment, blank lines ignored).
/// Unknown keys, unparsable values and out-of-range settings raise
/// ConfigError naming the offending line.
ScenarioConfig parse_config(const std::string& text);

/// parse_config applied to a file's contents; missing file raises ConfigError.
ScenarioConfig load_config(const std::string& path);

/// Render a config back to key=value lines (report embedding).
std::string format_config(const ScenarioConfig& cfg);

}  // namespace wplab
