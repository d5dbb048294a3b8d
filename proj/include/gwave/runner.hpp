#ifndef GWAVE_RUNNER_HPP
#define GWAVE_RUNNER_HPP

#include "gwave/report.hpp"
#include "gwave/scenario.hpp"

namespace gwave {

struct RunnerOptions {
    int threads = 1;
    int eps_floor_k = 0;          // 0: keep the per-dimension defaults
    bool include_timestamp = true;
};

struct RunOutputs {
    ordered_json report;
    std::vector<std::pair<std::string, std::string>> files;  // relative path -> content
    int exit_code = 0;
};

/// commands: classify | wavefront | singsupp | consistency | selftest
/// exit codes: 0 ok, 1 verdict mismatch / inconsistency, 2 usage or scenario
/// error (raised as Error by callers), 3 Inconclusive present
RunOutputs run_command(const Scenario& scenario, const std::string& command,
                       const RunnerOptions& opts = {});

/// scenario-free invariant suite; returns pass count / total and appends one
/// line per check to `lines`
std::pair<int, int> run_selftest(std::vector<std::string>& lines);

} // namespace gwave

#endif
