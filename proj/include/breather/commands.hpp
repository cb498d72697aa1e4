#pragma once

// Pipeline entry points behind the CLI subcommands. Each returns a process
// exit code: 0 pass, 1 verification failure, 2 config/input error,
// 3 non-convergence. All artifact files except timings.csv are byte
// reproducible for a fixed config and seed.

#include <string>
#include <vector>

#include "breather/config.hpp"

namespace breather {

int cmd_solve(const RunConfig& config);
int cmd_verify(const RunConfig& config, const std::string& solution_dir);
int cmd_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values);
int cmd_resolvent_bench(const RunConfig& config, int k_max);

}  // namespace breather
