#include <filesystem>
#include <fstream>

#include "breather/commands.hpp"
#include "breather/config.hpp"
#include "breather/snapshot.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace breather;
namespace fs = std::filesystem;

namespace {

fs::path temp_root() {
    const fs::path dir = fs::temp_directory_path() / "breather_tests";
    fs::create_directories(dir);
    return dir;
}

std::string small_config_text() {
    return "problem.points = 32\n"
           "problem.half_width = 10\n"
           "problem.cutoff = 3\n"
           "problem.epsilon = 1e-2\n"
           "solver.tol = 1e-6\n"
           "solver.max_iter = 500\n"
           "output.weak_tests = 4\n"
           "threads = 4\n";
}

RunConfig small_run_config(const std::string& out_name) {
    RunConfig cfg = parse_config(small_config_text());
    cfg.output.directory = (temp_root() / out_name).string();
    return cfg;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("resolved config round trips through the parser") {
    const RunConfig cfg = parse_config(small_config_text());
    const std::string text = resolved_text(cfg);
    const RunConfig back = parse_config(text);
    CHECK(resolved_text(back) == text);
    CHECK(back.problem.points == 32);
    CHECK(back.solver.tol == 1e-6);
    CHECK(back.output.weak_tests == 4);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_WITH_AS(parse_config("problem.banana = 3\n"),
                         doctest::Contains("unknown config key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("problem.p = 3\nproblem.p = 3\n"),
                         doctest::Contains("given twice"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("problem.p\n"), doctest::Contains("key = value"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("problem.p =\n"), doctest::Contains("empty value"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("problem.points = twelve\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("solver.scheme = bogus\n"), ConfigError);

    // comments and blank lines are fine
    const RunConfig cfg = parse_config("# header\n\nproblem.cutoff = 5 # inline\n");
    CHECK(cfg.problem.cutoff == 5);
}

TEST_CASE("validation rejects inadmissible physics") {
    RunConfig flat = parse_config(small_config_text());
    flat.problem.p = 2.0;
    CHECK_THROWS_WITH_AS(flat.validate(), doctest::Contains("2 < p"), ConfigError);

    RunConfig cosine = parse_config(small_config_text());
    cosine.problem.symmetry = 1;  // contains k = 0, no inverse for this operator
    CHECK_THROWS_WITH_AS(cosine.validate(), doctest::Contains("3 or 5"), ConfigError);

    RunConfig narrow = parse_config(small_config_text());
    narrow.problem.q = 5.0;
    CHECK_THROWS_AS(narrow.validate(), ConfigError);

    RunConfig threads = parse_config(small_config_text());
    threads.threads = 0;
    CHECK_THROWS_AS(threads.validate(), ConfigError);
}

TEST_CASE("load applies overrides in order") {
    const fs::path path = temp_root() / "override_test.cfg";
    std::ofstream(path) << small_config_text();
    const RunConfig cfg =
        load_config(path.string(), {"solver.tol=1e-9", "problem.cutoff=5", "solver.tol=1e-7"});
    CHECK(cfg.problem.cutoff == 5);
    CHECK(cfg.solver.tol == 1e-7);  // later override wins
    CHECK_THROWS_WITH_AS(load_config((temp_root() / "missing.cfg").string()),
                         doctest::Contains("cannot open"), ConfigError);
}

TEST_CASE("scheme names parse to the right solver") {
    CHECK(parse_config("solver.scheme = nehari_fixed_point\n").solver.scheme ==
          Scheme::NehariFixedPoint);
    CHECK(parse_config("solver.scheme = mountain_pass_descent\n").solver.scheme ==
          Scheme::MountainPassDescent);
}

TEST_CASE("field snapshots round trip bit for bit") {
    const DualProblem prob = small_problem();
    const auto& pp = prob.params();
    Rng rng(3);
    const TimeField V = random_time_field(prob.grid(), prob.sym(), pp.cutoff, pp.period, rng);

    const fs::path path = temp_root() / "roundtrip.field";
    write_field(path.string(), V);
    const TimeField back = read_field(path.string());
    CHECK(back.grid() == V.grid());
    CHECK(back.symmetry().index == V.symmetry().index);
    CHECK(back.cutoff() == V.cutoff());
    CHECK(back.period() == V.period());
    for (int k : V.mode_indices()) {
        const ComplexField& a = V.mode(k);
        const ComplexField& b = back.mode(k);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }

    const Potential weight = Potential::gaussian(prob.grid(), 1.0, 2.0, pp.p, pp.q);
    const fs::path wpath = temp_root() / "roundtrip.weight";
    write_weight(wpath.string(), weight);
    const Potential wback = read_weight(wpath.string());
    CHECK(wback.p() == weight.p());
    CHECK(wback.q() == weight.q());
    for (std::size_t i = 0; i < weight.values().size(); ++i)
        CHECK(wback.values()[i] == weight.values()[i]);

    // corrupt the magic and the reader must refuse
    std::string bytes = slurp(path);
    bytes[0] = 'X';
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK_THROWS_WITH_AS(read_field(path.string()), doctest::Contains("bad magic"), Error);
}

TEST_CASE("solve command end to end") {
    RunConfig cfg = small_run_config("cmd_e2e_a");
    fs::remove_all(cfg.output.directory);
    REQUIRE(cmd_solve(cfg) == 0);

    const fs::path out(cfg.output.directory);
    for (const char* name : {"manifest.txt", "config.resolved", "assumptions.txt",
                             "norm_decay.csv"})
        CHECK(fs::exists(out / name));
    const fs::path sol = out / "solution_00";
    for (const char* name : {"V.field", "U.field", "Q.field", "report.txt", "report.csv",
                             "iterations.csv", "timings.csv"})
        CHECK(fs::exists(sol / name));

    const std::string manifest = slurp(out / "manifest.txt");
    CHECK(manifest.find("exit 0") != std::string::npos);
    CHECK(manifest.find("solution_00.converged 1") != std::string::npos);
    CHECK(manifest.find("solution_00.verified 1") != std::string::npos);

    // the stored solution verifies standalone
    CHECK(cmd_verify(cfg, sol.string()) == 0);
    CHECK(fs::exists(sol / "verify_report.txt"));
    CHECK_THROWS_AS(cmd_verify(cfg, (temp_root() / "no_such_dir").string()), ConfigError);

    // identical config into a fresh directory: all artifacts except
    // timings.csv must be byte identical
    RunConfig cfg_b = small_run_config("cmd_e2e_b");
    fs::remove_all(cfg_b.output.directory);
    REQUIRE(cmd_solve(cfg_b) == 0);
    const fs::path sol_b = fs::path(cfg_b.output.directory) / "solution_00";
    for (const char* name : {"V.field", "U.field", "iterations.csv", "report.csv"})
        CHECK(slurp(sol / name) == slurp(sol_b / name));
}

TEST_CASE("solver that runs out of iterations reports non convergence") {
    RunConfig cfg = small_run_config("cmd_noconv");
    cfg.solver.max_iter = 3;
    fs::remove_all(cfg.output.directory);
    CHECK(cmd_solve(cfg) == 3);
    const std::string manifest = slurp(fs::path(cfg.output.directory) / "manifest.txt");
    CHECK(manifest.find("exit 3") != std::string::npos);
    CHECK(manifest.find("solution_00.converged 0") != std::string::npos);
}
