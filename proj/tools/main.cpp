#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsopt/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic-comparison optimization harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int threads = 1;
    CLI::App* run = app.add_subcommand("run", "run the experiment grid described by a config file");
    run->add_option("config", config_path, "path to the key = value config file")->required();
    run->add_option("--seed", seed_override, "override the config's master seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--out", out_override, "override the config's output directory");
    run->add_option("--threads", threads, "macroreplications run in parallel")
        ->check(CLI::PositiveNumber);

    std::vector<std::string> aggregate_paths;
    CLI::App* summarize_cmd =
        app.add_subcommand("summarize", "tabulate final-budget results of aggregate CSVs");
    summarize_cmd->add_option("aggregates", aggregate_paths, "aggregate CSV files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            rsopt::ExperimentConfig config = rsopt::parse_config(read_file(config_path));
            if (seed_set) config.seed = seed_override;
            if (!out_override.empty()) config.out_dir = out_override;
            const auto cells = rsopt::run_experiment(config, threads);
            for (const auto& cell : cells)
                std::cout << cell.label << ": " << cell.raw_path << " " << cell.aggregate_path
                          << "\n";
        } else {
            std::cout << rsopt::render_summary(rsopt::summarize(aggregate_paths));
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
