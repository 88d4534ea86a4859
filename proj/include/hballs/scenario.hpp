#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace hballs {

// process exit codes shared by the CLI and the scenario runner
enum ExitCode : int {
    ExitPass = 0,         // computed, all checks passed
    ExitCheckFailed = 1,  // computed, at least one check failed
    ExitConfigError = 2,  // config / geometry / IO error
    ExitSolverError = 3,  // solver failed to converge
};

struct RunRequest {
    std::string config_path;
    std::vector<std::string> overrides;  // dotted key=value pairs applied to the config
    std::string out_dir;                 // overrides config "out" when nonempty
    std::string green;                   // "analytic" / "numeric" override when nonempty
    bool write_artifacts = true;         // compute writes artifacts; verify only summary.json
};

// Run one scenario described by a JSON config ("kind": "ball",
// "twophase_reflection" or "nullqd").  Writes summary.json (and artifacts for
// compute) into the output directory.  Never throws; errors map to exit codes.
int run_scenario(const RunRequest& req);

// Re-run the scenario for each value of "alpha", "h" or "x0_y"; one output
// subdirectory per value plus a combined sweep.csv.  Alpha sweeps also check
// that consecutive swept sets are nested (up to one cell).
int run_sweep(const RunRequest& req, const std::string& parameter,
              const std::vector<double>& values);

// exposed for tests
nlohmann::json load_config(const RunRequest& req);  // throws ConfigError

}  // namespace hballs
