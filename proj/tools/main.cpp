#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "breather/commands.hpp"

namespace {

std::vector<double> parse_value_list(const std::string& arg) {
    std::vector<double> values;
    std::size_t at = 0;
    while (at <= arg.size()) {
        const std::size_t comma = arg.find(',', at);
        const std::string token =
            arg.substr(at, comma == std::string::npos ? std::string::npos : comma - at);
        if (token.empty()) throw breather::ConfigError("sweep values: empty entry in " + arg);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0')
            throw breather::ConfigError("sweep values: not a number: " + token);
        values.push_back(v);
        if (comma == std::string::npos) break;
        at = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral solver for time-periodic breathers of u_tt + L u = Q |u|^{p-2} u"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string solution_dir;
    std::string axis;
    std::string values_arg;
    long long seed = -1;
    int threads = 0;
    int k_max = 15;
    std::vector<std::string> overrides;

    const auto add_common = [&](CLI::App* cmd, bool config_required) {
        CLI::Option* opt = cmd->add_option("--config", config_path, "run configuration file");
        if (config_required) opt->required();
        cmd->add_option("--out", out_dir, "override output.directory");
        cmd->add_option("--seed", seed, "override solver.seed");
        cmd->add_option("--threads", threads, "override threads");
        cmd->add_option("--override", overrides, "key=value override, repeatable");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve, verify and store breather branches");
    add_common(solve, true);

    CLI::App* verify = app.add_subcommand("verify", "re-verify a stored solution directory");
    verify->add_option("dir", solution_dir, "solution directory")->required();
    add_common(verify, false);

    CLI::App* sweep = app.add_subcommand("sweep", "repeat the solve along one parameter axis");
    add_common(sweep, true);
    sweep->add_option("--axis", axis, "k_cutoff | epsilon | box | p")->required();
    sweep->add_option("--values", values_arg, "comma separated axis values")->required();

    CLI::App* bench =
        app.add_subcommand("resolvent-bench", "tabulate ||R_k^Q|| estimates against k");
    add_common(bench, true);
    bench->add_option("--kmax", k_max, "largest temporal mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::vector<std::string> all_overrides = overrides;
        if (!out_dir.empty()) all_overrides.push_back("output.directory=" + out_dir);
        if (seed >= 0) all_overrides.push_back("solver.seed=" + std::to_string(seed));
        if (threads > 0) all_overrides.push_back("threads=" + std::to_string(threads));

        if (verify->parsed() && config_path.empty())
            config_path = solution_dir + "/config.resolved";

        const breather::RunConfig config = breather::load_config(config_path, all_overrides);

        if (solve->parsed()) return breather::cmd_solve(config);
        if (verify->parsed()) return breather::cmd_verify(config, solution_dir);
        if (sweep->parsed()) return breather::cmd_sweep(config, axis, parse_value_list(values_arg));
        return breather::cmd_resolvent_bench(config, k_max);
    } catch (const breather::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const breather::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
