#pragma once

// Flat `key = value` run configuration with dotted sections (problem.*,
// solver.*, potential.*, output.*) plus the bare `threads` knob. Unknown and
// duplicate keys are rejected; '#' starts a comment. The resolved form
// (defaults expanded, canonical order, %.17g floats) round-trips through the
// parser unchanged, so config.resolved is enough to reproduce a run exactly.

#include <string>
#include <vector>

#include "breather/dual.hpp"
#include "breather/solve.hpp"

namespace breather {

struct PotentialRecipe {
    std::string kind = "gaussian";  // gaussian | constant
    double amplitude = 1.0;
    double width = 2.0;  // gaussian only
};

struct OutputOptions {
    std::string directory = "out";
    int weak_tests = 20;
    bool eps_refinement = false;
    int eps_levels = 2;
};

struct RunConfig {
    ProblemParams problem;
    std::string operator_kind = "fractional_laplacian";  // fractional_laplacian | klein_gordon
    double gamma = 1.0;
    double mass = 1.0;
    SolverConfig solver;
    PotentialRecipe potential;
    OutputOptions output;
    int threads = 1;

    OperatorSpec make_operator() const;
    Potential make_potential() const;
    DualProblem make_problem() const;
    // Full validation: exponent admissibility, operator construction, solver
    // ranges. Throws ConfigError on any violation.
    void validate() const;
};

RunConfig parse_config(const std::string& text);
// Reads the file, applies `key=value` overrides in order, validates.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Canonical serialization with every key present.
std::string resolved_text(const RunConfig& config);

}  // namespace breather
