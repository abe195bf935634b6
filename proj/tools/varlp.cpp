#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "varlp/cli/runner.hpp"
#include "varlp/cli/scenario.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Variable-exponent Lebesgue space probes"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::size_t levels = 0;
    std::uint64_t seed = 0;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run every probe of a scenario and write reports");
    run->add_option("config", config, "scenario file")->required();
    auto* out_opt = run->add_option("--out", out, "output directory (overrides the scenario)");
    auto* levels_opt = run->add_option("--levels", levels, "number of refinement levels")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "seed for random test functions");
    run->add_flag("--quiet", quiet, "no progress output");

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario");
    validate->add_option("config", config, "scenario file")->required();

    app.add_subcommand("list-probes", "list probe names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-probes")) {
            for (const std::string& name : varlp::cli::probe_names()) {
                std::cout << name << "  " << varlp::cli::probe_description(name) << '\n';
            }
            return 0;
        }
        const varlp::cli::Scenario s = varlp::cli::parse_scenario(config);
        if (app.got_subcommand("validate")) {
            std::cout << config << ": ok, " << s.probes.size() << " probes\n";
            return 0;
        }
        varlp::cli::RunOptions opt;
        if (*out_opt) opt.out = out;
        if (*levels_opt) opt.levels = levels;
        if (*seed_opt) opt.seed = seed;
        opt.quiet = quiet;
        opt.log = &std::cerr;
        const varlp::cli::RunResult r = varlp::cli::run_scenario(s, opt);
        if (!quiet) std::cerr << "wrote " << r.out_dir.string() << "/summary.csv, exit " << r.exit_code << '\n';
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
