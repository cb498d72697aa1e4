#include "breather/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "breather/snapshot.hpp"
#include "breather/verify.hpp"

namespace breather {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error("write failed: " + path.string());
}

std::string iteration_csv(const Solution& sol) {
    std::string out = "iter,J,residual,norm_V_pprime,nehari_t\n";
    for (const IterationRecord& rec : sol.history) {
        out += std::to_string(rec.iter);
        out += ',';
        out += fmt(rec.J);
        out += ',';
        out += fmt(rec.residual);
        out += ',';
        out += fmt(rec.norm_V_pprime);
        out += ',';
        out += fmt(rec.nehari_t);
        out += '\n';
    }
    return out;
}

std::string timing_csv(const Solution& sol) {
    std::string out = "iter,wall_ms\n";
    for (const IterationRecord& rec : sol.history) {
        out += std::to_string(rec.iter);
        out += ',';
        out += fmt(rec.wall_ms);
        out += '\n';
    }
    return out;
}

std::string solution_tag(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "solution_%02d", index);
    return buf;
}

// Fit of log mode energy against log(k^2+1) over the active positive modes;
// nan when fewer than three modes carry mass.
double mode_tail_slope(const Solution& sol) {
    double peak = 0.0;
    for (const auto& [k, e] : sol.mode_energy) peak = std::max(peak, e);
    std::vector<double> xs, ys;
    for (const auto& [k, e] : sol.mode_energy) {
        if (k > 0 && e > 1e-14 * peak) {
            xs.push_back(static_cast<double>(k) * k + 1.0);
            ys.push_back(e);
        }
    }
    if (xs.size() < 3) return std::nan("");
    return fit_loglog(xs, ys).slope;
}

struct SolveOutcome {
    std::vector<Solution> solutions;
    std::vector<VerificationReport> reports;
    std::string failure_note;
};

void write_solution_dir(const fs::path& dir, const RunConfig& config, const DualProblem& prob,
                        const Solution& sol, const VerificationReport& report) {
    fs::create_directories(dir);
    write_text(dir / "config.resolved", resolved_text(config));
    write_field((dir / "V.field").string(), sol.V);
    write_field((dir / "U.field").string(), sol.U);
    write_weight((dir / "Q.field").string(), prob.weight());
    write_text(dir / "report.txt", report_text(report));
    write_text(dir / "report.csv", report_csv(report));
    write_text(dir / "iterations.csv", iteration_csv(sol));
    write_text(dir / "timings.csv", timing_csv(sol));
}

std::string manifest_text(const RunConfig& config, const AssumptionReport& assumptions,
                          const SolveOutcome& outcome, int exit_code) {
    std::string out = "run solve\n";
    out += "exit " + std::to_string(exit_code) + "\n";
    out += "assumptions_pass " + std::to_string(assumptions.report.all_passed() ? 1 : 0) + "\n";
    out += "diag.alpha ";
    const CheckEntry* alpha = assumptions.report.find("A1_alpha");
    out += fmt(alpha ? alpha->value : 0.0);
    out += "\n";
    out += "diag.C_R " + fmt(assumptions.C_R) + "\n";
    out += "diag.mp_radius " + fmt(assumptions.mp.radius) + "\n";
    out += "diag.mp_level " + fmt(assumptions.mp.level) + "\n";
    out += "solutions " + std::to_string(outcome.solutions.size()) + "\n";
    for (std::size_t j = 0; j < outcome.solutions.size(); ++j) {
        const Solution& sol = outcome.solutions[j];
        const std::string tag = solution_tag(static_cast<int>(j));
        out += tag + ".J " + fmt(sol.J_value) + "\n";
        out += tag + ".residual " + fmt(sol.residual) + "\n";
        out += tag + ".iterations " + std::to_string(sol.iterations) + "\n";
        out += tag + ".converged " + std::to_string(sol.converged ? 1 : 0) + "\n";
        out += tag + ".distinct " + std::to_string(sol.distinct ? 1 : 0) + "\n";
        out += tag + ".nehari_t " + fmt(sol.nehari_t) + "\n";
        const bool verified =
            j < outcome.reports.size() && outcome.reports[j].all_passed();
        out += tag + ".verified " + std::to_string(verified ? 1 : 0) + "\n";
        for (const auto& [k, e] : sol.mode_energy)
            out += tag + ".mode_energy.k" + std::to_string(k) + " " + fmt(e) + "\n";
    }
    if (!outcome.failure_note.empty()) out += "failure " + outcome.failure_note + "\n";
    out += "config:\n";
    out += resolved_text(config);
    return out;
}

std::string decay_csv(const NormDecayReport& report) {
    std::string out = "k,estimate\n";
    for (const NormDecayEntry& e : report.entries) {
        out += std::to_string(e.k);
        out += ',';
        out += fmt(e.estimate);
        out += '\n';
    }
    return out;
}

VerificationReport augment_report(const RunConfig& config, const AssumptionReport& assumptions,
                                  const Solution& sol, VerificationReport report, int index) {
    report.add("solver_converged", sol.residual, config.solver.tol, sol.converged,
               "final solver residual against solver.tol");
    report.add("mp_level_lower_bound", sol.J_value, assumptions.mp.level,
               sol.J_value >= assumptions.mp.level - 1e-6,
               "J(V) must sit at or above the mountain pass level delta");
    if (index > 0) {
        report.add("deflation_distinct", sol.distinct ? 1.0 : 0.0, 0.0, sol.distinct,
                   "pairing angle to every previous solution exceeds the deflation threshold");
    }
    return report;
}

int sweep_value_as_int(double v, const std::string& axis) {
    const int k = static_cast<int>(std::lround(v));
    if (std::abs(v - k) > 1e-9)
        throw ConfigError("sweep axis " + axis + ": value " + fmt(v) + " is not an integer");
    return k;
}

}  // namespace

int cmd_solve(const RunConfig& config) {
    set_thread_budget(config.threads);
    const DualProblem prob = config.make_problem();
    const fs::path out_dir(config.output.directory);
    fs::create_directories(out_dir);
    write_text(out_dir / "config.resolved", resolved_text(config));

    std::printf("assumption checks (alpha = %.6g, modes %d, grid %d^%d)\n", prob.alpha(),
                prob.params().cutoff, prob.params().points, prob.params().dim);
    const AssumptionReport assumptions = assumption_report(prob, config.solver.seed);
    write_text(out_dir / "assumptions.txt", report_text(assumptions.report));
    write_text(out_dir / "assumptions.csv", report_csv(assumptions.report));
    write_text(out_dir / "norm_decay.csv", decay_csv(assumptions.decay));
    std::fputs(report_text(assumptions.report).c_str(), stdout);

    SolveOutcome outcome;
    if (!assumptions.report.all_passed()) {
        outcome.failure_note = "assumption checks failed; solve not attempted";
        const std::string manifest = manifest_text(config, assumptions, outcome, 1);
        write_text(out_dir / "manifest.txt", manifest);
        std::fputs("assumption checks failed; not solving\n", stdout);
        return 1;
    }

    for (int j = 0; j < config.solver.deflation_count; ++j) {
        std::printf("solving branch %d (scheme %s)\n", j,
                    config.solver.scheme == Scheme::MountainPassDescent ? "mountain_pass_descent"
                                                                        : "nehari_fixed_point");
        try {
            Solution sol =
                j == 0 ? (config.solver.scheme == Scheme::MountainPassDescent
                              ? mountain_pass_descent(prob, config.solver, assumptions.C_R)
                              : iterate_fixed_point(prob, config.solver))
                       : deflate_and_continue(outcome.solutions, prob, config.solver);
            std::printf("branch %d: J = %.9g residual = %.3e iterations = %d converged = %d\n", j,
                        sol.J_value, sol.residual, sol.iterations, sol.converged ? 1 : 0);
            outcome.solutions.push_back(std::move(sol));
        } catch (const Error& e) {
            outcome.failure_note = e.what();
            std::printf("branch %d failed: %s\n", j, e.what());
            break;
        }
        if (!outcome.solutions.back().converged) break;
    }

    bool all_verified = true;
    for (std::size_t j = 0; j < outcome.solutions.size(); ++j) {
        const Solution& sol = outcome.solutions[j];
        VerificationReport report =
            verify_solution(prob, sol.V, sol.U, config.solver.tol, config.output.weak_tests,
                            config.solver.seed);
        report = augment_report(config, assumptions, sol, std::move(report), static_cast<int>(j));

        if (config.output.eps_refinement && sol.converged) {
            const std::vector<RefinementLevel> levels = epsilon_refinement(
                prob, config.solver, sol, config.output.eps_levels, config.output.weak_tests,
                config.solver.seed);
            std::string csv = "epsilon,residual,J,max_weak_residual\n";
            double worst_ratio = 0.0;
            for (std::size_t l = 0; l < levels.size(); ++l) {
                csv += fmt(levels[l].epsilon) + "," + fmt(levels[l].residual) + "," +
                       fmt(levels[l].j_value) + "," + fmt(levels[l].max_weak_residual) + "\n";
                if (l > 0) {
                    const double prev = std::max(levels[l - 1].max_weak_residual, 1e-14);
                    worst_ratio = std::max(worst_ratio, levels[l].max_weak_residual / prev);
                }
            }
            fs::create_directories(out_dir / solution_tag(static_cast<int>(j)));
            write_text(out_dir / solution_tag(static_cast<int>(j)) / "refinement.csv", csv);
            report.add("eps_refinement_ratio", worst_ratio, 1.05, worst_ratio <= 1.05,
                       "weak form residual must not grow as epsilon is halved");
        }

        write_solution_dir(out_dir / solution_tag(static_cast<int>(j)), config, prob, sol, report);
        std::printf("%s verification:\n", solution_tag(static_cast<int>(j)).c_str());
        std::fputs(report_text(report).c_str(), stdout);
        all_verified = all_verified && report.all_passed();
        outcome.reports.push_back(std::move(report));
    }

    const bool complete = static_cast<int>(outcome.solutions.size()) ==
                              config.solver.deflation_count &&
                          std::all_of(outcome.solutions.begin(), outcome.solutions.end(),
                                      [](const Solution& s) { return s.converged; });
    int code = 0;
    if (!complete) code = 3;
    else if (!all_verified) code = 1;

    write_text(out_dir / "manifest.txt", manifest_text(config, assumptions, outcome, code));
    std::printf("exit %d\n", code);
    return code;
}

int cmd_verify(const RunConfig& config, const std::string& solution_dir) {
    set_thread_budget(config.threads);
    const fs::path dir(solution_dir);

    TimeField V = [&] {
        try {
            return read_field((dir / "V.field").string());
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }();
    TimeField U = [&] {
        try {
            return read_field((dir / "U.field").string());
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }();
    Potential weight = [&] {
        try {
            return read_weight((dir / "Q.field").string());
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }();

    const SpaceGrid grid = config.problem.make_grid();
    if (!(V.grid() == grid) || !(U.grid() == grid) || !(weight.grid() == grid))
        throw ConfigError("stored fields do not match the configured grid");
    if (V.symmetry().index != config.problem.symmetry || V.cutoff() != config.problem.cutoff ||
        V.period() != config.problem.period)
        throw ConfigError("stored field does not match the configured symmetry class");
    if (weight.p() != config.problem.p || weight.q() != config.problem.q)
        throw ConfigError("stored weight exponents do not match the config");

    const DualProblem prob(config.problem, config.make_operator(), std::move(weight));

    const AssumptionReport assumptions = assumption_report(prob, config.solver.seed);
    write_text(dir / "verify_assumptions.txt", report_text(assumptions.report));

    VerificationReport report = verify_solution(prob, V, U, config.solver.tol,
                                                config.output.weak_tests, config.solver.seed);
    report.add("mp_level_lower_bound", prob.functional_J(V), assumptions.mp.level,
               prob.functional_J(V) >= assumptions.mp.level - 1e-6,
               "J(V) must sit at or above the mountain pass level delta");
    write_text(dir / "verify_report.txt", report_text(report));
    write_text(dir / "verify_report.csv", report_csv(report));
    std::fputs(report_text(report).c_str(), stdout);

    const bool pass = report.all_passed() && assumptions.report.all_passed();
    std::printf("verify %s: %s\n", solution_dir.c_str(), pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& config, const std::string& axis,
              const std::vector<double>& values) {
    set_thread_budget(config.threads);
    if (values.empty()) throw ConfigError("sweep: need at least one axis value");

    // Build and validate every sub-config before any compute.
    std::vector<RunConfig> runs;
    for (double v : values) {
        RunConfig sub = config;
        if (axis == "k_cutoff") sub.problem.cutoff = sweep_value_as_int(v, axis);
        else if (axis == "epsilon") sub.problem.epsilon = v;
        else if (axis == "box") sub.problem.half_width = v;
        else if (axis == "p") sub.problem.p = v;
        else throw ConfigError("sweep: unknown axis " + axis + " (use k_cutoff|epsilon|box|p)");
        sub.validate();
        runs.push_back(std::move(sub));
    }

    const fs::path out_dir(config.output.directory);
    fs::create_directories(out_dir);

    std::string csv = axis + ",J,residual,iterations,converged,decay_slope,mode_tail_slope\n";
    bool all_converged = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RunConfig& sub = runs[i];
        const DualProblem prob = sub.make_problem();
        std::printf("sweep %s = %s\n", axis.c_str(), fmt(values[i]).c_str());
        Solution sol = sub.solver.scheme == Scheme::MountainPassDescent
                           ? mountain_pass_descent(prob, sub.solver,
                                                   assumption_report(prob, sub.solver.seed).C_R)
                           : iterate_fixed_point(prob, sub.solver);
        all_converged = all_converged && sol.converged;

        double slope = std::nan("");
        try {
            slope = decay_profile(prob, synthesize(sol.U, prob.sample_count())).slope;
        } catch (const Error&) {
        }
        csv += fmt(values[i]) + "," + fmt(sol.J_value) + "," + fmt(sol.residual) + "," +
               std::to_string(sol.iterations) + "," + std::to_string(sol.converged ? 1 : 0) + "," +
               fmt(slope) + "," + fmt(mode_tail_slope(sol)) + "\n";
        std::printf("  J = %.9g residual = %.3e converged = %d\n", sol.J_value, sol.residual,
                    sol.converged ? 1 : 0);
    }

    write_text(out_dir / ("sweep_" + axis + ".csv"), csv);
    return all_converged ? 0 : 3;
}

int cmd_resolvent_bench(const RunConfig& config, int k_max) {
    set_thread_budget(config.threads);
    if (k_max < 1) throw ConfigError("resolvent-bench: k_max must be positive");
    const DualProblem prob = config.make_problem();

    const NormDecayReport report = prob.norm_decay_report(k_max, 16, 16, config.solver.seed);
    std::string csv = "k,epsilon,norm_estimate,alpha_target\n";
    for (const NormDecayEntry& e : report.entries) {
        csv += std::to_string(e.k) + "," + fmt(config.problem.epsilon) + "," + fmt(e.estimate) +
               "," + fmt(report.alpha_target) + "\n";
    }
    char fitline[160];
    std::snprintf(fitline, sizeof(fitline), "# fit slope %.17g target %.17g rms %.17g\n",
                  report.fit.slope, -0.5 * report.alpha_target, report.fit.rms_residual);
    csv += fitline;

    const fs::path out_dir(config.output.directory);
    fs::create_directories(out_dir);
    write_text(out_dir / "resolvent_bench.csv", csv);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

}  // namespace breather
