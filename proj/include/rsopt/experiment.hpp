#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rsopt/benchmarks.hpp"
#include "rsopt/policies.hpp"
#include "rsopt/search.hpp"

namespace rsopt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Description of one comparison policy as named in a config file. A fresh
// policy object is instantiated per macroreplication so reactive state never
// leaks between runs.
struct PolicySpec {
    enum class Kind { Reactive, Fixed, Ssm };

    Kind kind = Kind::Reactive;
    GuardParams guard;   // Reactive
    int fixed_n = 1;     // Fixed
    SSMParams ssm;       // Ssm

    std::string label() const;
    std::unique_ptr<ComparisonPolicy> instantiate() const;
};

struct ExperimentConfig {
    BenchmarkFunction function = BenchmarkFunction::Griewank;
    int dimension = 10;
    double noise = 0.0;
    std::vector<double> steps;
    std::vector<PolicySpec> policies;
    std::uint64_t budget = 0;
    int macroreps = 0;
    std::uint64_t seed = 0;
    std::uint64_t stride = 50;
    std::string out_dir = ".";
};

// Parses the flat key = value format ('#' comments, one key per line; the
// policy key may repeat). Errors carry the offending line number.
ExperimentConfig parse_config(const std::string& text);

struct CellFiles {
    std::string label;           // "<function>_noise<p>_step<s>_<policy>"
    std::string raw_path;        // per-comparison trace rows
    std::string aggregate_path;  // checkpoint-grid means
};

// Runs every (step, policy) cell of the grid: macroreplication m of a cell
// uses child_seed(seed, m), traces are written as CSV under out_dir, and row
// order never depends on thread count, so output bytes are reproducible.
std::vector<CellFiles> run_experiment(const ExperimentConfig& config, int threads = 1);

struct SummaryRow {
    std::string source;
    double final_mean_best = 0.0;
    double final_stderr_best = 0.0;
    double mean_comparison_samples = 0.0;
};

// Final-budget summary of aggregate CSVs: mean and standard error of the best
// noiseless value, and the run-wide mean sample size per comparison.
std::vector<SummaryRow> summarize(const std::vector<std::string>& aggregate_paths);

std::string render_summary(const std::vector<SummaryRow>& rows);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace rsopt
