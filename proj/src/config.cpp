#include "breather/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace breather {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key " + key + ": not a number: " + value);
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key " + key + ": not an integer: " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("config key " + key + ": expected true or false, got " + value);
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "problem.dim") cfg.problem.dim = static_cast<int>(parse_int(key, value));
    else if (key == "problem.p") cfg.problem.p = parse_double(key, value);
    else if (key == "problem.q") cfg.problem.q = parse_double(key, value);
    else if (key == "problem.symmetry") cfg.problem.symmetry = static_cast<int>(parse_int(key, value));
    else if (key == "problem.period") cfg.problem.period = parse_double(key, value);
    else if (key == "problem.cutoff") cfg.problem.cutoff = static_cast<int>(parse_int(key, value));
    else if (key == "problem.half_width") cfg.problem.half_width = parse_double(key, value);
    else if (key == "problem.points") cfg.problem.points = static_cast<int>(parse_int(key, value));
    else if (key == "problem.epsilon") cfg.problem.epsilon = parse_double(key, value);
    else if (key == "problem.operator") cfg.operator_kind = value;
    else if (key == "problem.gamma") cfg.gamma = parse_double(key, value);
    else if (key == "problem.mass") cfg.mass = parse_double(key, value);
    else if (key == "solver.scheme") {
        if (value == "nehari_fixed_point") cfg.solver.scheme = Scheme::NehariFixedPoint;
        else if (value == "mountain_pass_descent") cfg.solver.scheme = Scheme::MountainPassDescent;
        else throw ConfigError("config key solver.scheme: unknown scheme " + value);
    } else if (key == "solver.max_iter") cfg.solver.max_iter = static_cast<int>(parse_int(key, value));
    else if (key == "solver.tol") cfg.solver.tol = parse_double(key, value);
    else if (key == "solver.mixing") cfg.solver.mixing = parse_double(key, value);
    else if (key == "solver.armijo_c") cfg.solver.armijo_c = parse_double(key, value);
    else if (key == "solver.backtrack") cfg.solver.backtrack = parse_double(key, value);
    else if (key == "solver.initial_step") cfg.solver.initial_step = parse_double(key, value);
    else if (key == "solver.seed") {
        const long long v = parse_int(key, value);
        if (v < 0) throw ConfigError("config key solver.seed: must be nonnegative");
        cfg.solver.seed = static_cast<std::uint64_t>(v);
    } else if (key == "solver.deflation_count")
        cfg.solver.deflation_count = static_cast<int>(parse_int(key, value));
    else if (key == "solver.reseed_limit") cfg.solver.reseed_limit = static_cast<int>(parse_int(key, value));
    else if (key == "solver.noise_scale") cfg.solver.noise_scale = parse_double(key, value);
    else if (key == "solver.deflation_angle") cfg.solver.deflation_angle = parse_double(key, value);
    else if (key == "solver.deflation_damping")
        cfg.solver.deflation_damping = parse_double(key, value);
    else if (key == "potential.kind") cfg.potential.kind = value;
    else if (key == "potential.amplitude") cfg.potential.amplitude = parse_double(key, value);
    else if (key == "potential.width") cfg.potential.width = parse_double(key, value);
    else if (key == "output.directory") cfg.output.directory = value;
    else if (key == "output.weak_tests") cfg.output.weak_tests = static_cast<int>(parse_int(key, value));
    else if (key == "output.eps_refinement") cfg.output.eps_refinement = parse_bool(key, value);
    else if (key == "output.eps_levels") cfg.output.eps_levels = static_cast<int>(parse_int(key, value));
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
    else throw ConfigError("unknown config key: " + key);
}

void apply_line(RunConfig& cfg, std::set<std::string>* seen, const std::string& raw, int lineno) {
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) return;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
        throw ConfigError("config key " + key + ": empty value");
    if (seen && !seen->insert(key).second)
        throw ConfigError("config key " + key + " given twice");
    assign(cfg, key, value);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

OperatorSpec RunConfig::make_operator() const {
    if (operator_kind == "fractional_laplacian") return OperatorSpec::fractional_laplacian(gamma);
    if (operator_kind == "klein_gordon") return OperatorSpec::klein_gordon(mass);
    throw ConfigError("problem.operator: unknown operator " + operator_kind);
}

Potential RunConfig::make_potential() const {
    const SpaceGrid grid = problem.make_grid();
    if (potential.kind == "gaussian")
        return Potential::gaussian(grid, potential.amplitude, potential.width, problem.p,
                                   problem.q);
    if (potential.kind == "constant")
        return Potential::constant(grid, potential.amplitude, problem.p, problem.q);
    throw ConfigError("potential.kind: unknown kind " + potential.kind);
}

DualProblem RunConfig::make_problem() const {
    return DualProblem(problem, make_operator(), make_potential());
}

void RunConfig::validate() const {
    // DualProblem construction runs the full admissibility chain: operator
    // factory, exponent ranges, alpha, symmetry/operator compatibility,
    // resonance scan.
    (void)make_problem();
    solver.validate();
    if (threads < 1 || threads > 256)
        throw ConfigError("threads must be between 1 and 256");
    if (output.weak_tests < 1) throw ConfigError("output.weak_tests must be positive");
    if (output.eps_levels < 1 || output.eps_levels > 6)
        throw ConfigError("output.eps_levels must be between 1 and 6");
    if (output.directory.empty()) throw ConfigError("output.directory must not be empty");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) apply_line(cfg, &seen, line, ++lineno);
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    RunConfig cfg = parse_config(buffer.str());
    for (const std::string& entry : overrides) apply_line(cfg, nullptr, entry, 0);
    cfg.validate();
    return cfg;
}

std::string resolved_text(const RunConfig& c) {
    std::string out;
    const auto emit = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    emit("problem.dim", std::to_string(c.problem.dim));
    emit("problem.p", fmt(c.problem.p));
    emit("problem.q", fmt(c.problem.q));
    emit("problem.symmetry", std::to_string(c.problem.symmetry));
    emit("problem.period", fmt(c.problem.period));
    emit("problem.cutoff", std::to_string(c.problem.cutoff));
    emit("problem.half_width", fmt(c.problem.half_width));
    emit("problem.points", std::to_string(c.problem.points));
    emit("problem.epsilon", fmt(c.problem.epsilon));
    emit("problem.operator", c.operator_kind);
    emit("problem.gamma", fmt(c.gamma));
    emit("problem.mass", fmt(c.mass));
    emit("solver.scheme", c.solver.scheme == Scheme::NehariFixedPoint ? "nehari_fixed_point"
                                                                      : "mountain_pass_descent");
    emit("solver.max_iter", std::to_string(c.solver.max_iter));
    emit("solver.tol", fmt(c.solver.tol));
    emit("solver.mixing", fmt(c.solver.mixing));
    emit("solver.armijo_c", fmt(c.solver.armijo_c));
    emit("solver.backtrack", fmt(c.solver.backtrack));
    emit("solver.initial_step", fmt(c.solver.initial_step));
    emit("solver.seed", std::to_string(c.solver.seed));
    emit("solver.deflation_count", std::to_string(c.solver.deflation_count));
    emit("solver.reseed_limit", std::to_string(c.solver.reseed_limit));
    emit("solver.noise_scale", fmt(c.solver.noise_scale));
    emit("solver.deflation_angle", fmt(c.solver.deflation_angle));
    emit("solver.deflation_damping", fmt(c.solver.deflation_damping));
    emit("potential.kind", c.potential.kind);
    emit("potential.amplitude", fmt(c.potential.amplitude));
    emit("potential.width", fmt(c.potential.width));
    emit("output.directory", c.output.directory);
    emit("output.weak_tests", std::to_string(c.output.weak_tests));
    emit("output.eps_refinement", c.output.eps_refinement ? "true" : "false");
    emit("output.eps_levels", std::to_string(c.output.eps_levels));
    emit("threads", std::to_string(c.threads));
    return out;
}

}  // namespace breather
