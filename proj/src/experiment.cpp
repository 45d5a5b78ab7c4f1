#include "rsopt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace rsopt {

namespace {

constexpr const char* kRawHeader = "macrorep,spent,best_noiseless,comparison_samples";
constexpr const char* kAggregateHeader =
    "spent,mean_best_noiseless,stderr_best_noiseless,mean_comparison_samples";

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double parse_real(const std::string& value, int line, const std::string& key) {
    std::size_t consumed = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &consumed);
    } catch (const std::exception&) {
        fail(line, "malformed value '" + value + "' for " + key);
    }
    if (consumed != value.size()) fail(line, "malformed value '" + value + "' for " + key);
    return parsed;
}

std::uint64_t parse_unsigned(const std::string& value, int line, const std::string& key) {
    std::size_t consumed = 0;
    unsigned long long parsed = 0;
    try {
        parsed = std::stoull(value, &consumed);
    } catch (const std::exception&) {
        fail(line, "malformed value '" + value + "' for " + key);
    }
    if (consumed != value.size() || value.front() == '-')
        fail(line, "malformed value '" + value + "' for " + key);
    return parsed;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

PolicySpec parse_policy(const std::string& value, int line) {
    std::istringstream in(value);
    std::string kind;
    in >> kind;
    std::map<std::string, std::string> args;
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) fail(line, "policy option '" + token + "' is not key=value");
        args[token.substr(0, eq)] = token.substr(eq + 1);
    }
    const auto take = [&](const char* name, bool required, const std::string& fallback) {
        const auto it = args.find(name);
        if (it == args.end()) {
            if (required) fail(line, std::string("policy is missing required option ") + name);
            return fallback;
        }
        std::string v = it->second;
        args.erase(it);
        return v;
    };

    PolicySpec spec;
    if (kind == "reactive") {
        spec.kind = PolicySpec::Kind::Reactive;
        spec.guard.alpha_req = parse_real(take("alpha", true, ""), line, "policy alpha");
        spec.guard.beta_req = parse_real(take("beta", true, ""), line, "policy beta");
        spec.guard.delta_fraction = parse_real(take("delta", true, ""), line, "policy delta");
        spec.guard.n_min = static_cast<int>(parse_unsigned(take("nmin", false, "2"), line, "policy nmin"));
        const std::string nmax = take("nmax", false, "inf");
        if (nmax != "inf")
            spec.guard.n_max = static_cast<int>(parse_unsigned(nmax, line, "policy nmax"));
        if (!(spec.guard.alpha_req > 0.0 && spec.guard.alpha_req < 0.5))
            fail(line, "reactive alpha must lie in (0, 0.5)");
        if (!(spec.guard.beta_req > 0.0 && spec.guard.beta_req < 1.0))
            fail(line, "reactive beta must lie in (0, 1)");
        if (spec.guard.delta_fraction < 0.0) fail(line, "reactive delta must be >= 0");
        if (spec.guard.n_min < 2) fail(line, "reactive nmin must be >= 2");
        if (spec.guard.n_max && *spec.guard.n_max < spec.guard.n_min)
            fail(line, "reactive nmax must be >= nmin");
    } else if (kind == "fixed") {
        spec.kind = PolicySpec::Kind::Fixed;
        spec.fixed_n = static_cast<int>(parse_unsigned(take("n", true, ""), line, "policy n"));
        if (spec.fixed_n < 1) fail(line, "fixed n must be >= 1");
    } else if (kind == "ssm") {
        spec.kind = PolicySpec::Kind::Ssm;
        spec.ssm.alpha = parse_real(take("alpha", true, ""), line, "policy alpha");
        spec.ssm.delta = parse_real(take("delta", true, ""), line, "policy delta");
        spec.ssm.n0 = static_cast<int>(parse_unsigned(take("n0", false, "2"), line, "policy n0"));
        spec.ssm.c = static_cast<int>(parse_unsigned(take("c", false, "1"), line, "policy c"));
        if (!(spec.ssm.alpha > 0.0 && spec.ssm.alpha < 0.5))
            fail(line, "ssm alpha must lie in (0, 0.5)");
        if (!(spec.ssm.delta > 0.0)) fail(line, "ssm delta must be > 0");
        if (spec.ssm.n0 < 2) fail(line, "ssm n0 must be >= 2");
        if (spec.ssm.c < 1) fail(line, "ssm c must be >= 1");
    } else {
        fail(line, "unknown policy kind '" + kind + "'");
    }
    if (!args.empty()) fail(line, "unknown policy option '" + args.begin()->first + "'");
    return spec;
}

struct CheckpointStats {
    std::uint64_t spent = 0;
    double mean_best = 0.0;
    double stderr_best = 0.0;
    double mean_samples = 0.0;
};

// Checkpoint-grid view of one cell: best value carried forward from the last
// comparison at or before each checkpoint, and the running mean sample size
// over the comparisons resolved so far. The final checkpoint therefore holds
// the run-wide mean samples per comparison.
std::vector<CheckpointStats> aggregate_traces(const std::vector<std::vector<TracePoint>>& traces,
                                              std::uint64_t budget, std::uint64_t stride) {
    const std::uint64_t points = (budget + stride - 1) / stride + 1;
    const double reps = static_cast<double>(traces.size());

    std::vector<CheckpointStats> grid(points);
    std::vector<std::size_t> cursor(traces.size(), 0);
    std::vector<double> sample_sum(traces.size(), 0.0);
    std::vector<double> sample_count(traces.size(), 0.0);

    for (std::uint64_t k = 0; k < points; ++k) {
        const std::uint64_t t = k * stride;
        double sum = 0.0, sum_sq = 0.0, samples = 0.0;
        for (std::size_t m = 0; m < traces.size(); ++m) {
            const auto& trace = traces[m];
            while (cursor[m] + 1 < trace.size() && trace[cursor[m] + 1].spent <= t) {
                ++cursor[m];
                sample_sum[m] += trace[cursor[m]].comparison_samples;
                sample_count[m] += 1.0;
            }
            const double best = trace[cursor[m]].best_noiseless;
            sum += best;
            sum_sq += best * best;
            samples += sample_count[m] > 0.0 ? sample_sum[m] / sample_count[m] : 0.0;
        }
        CheckpointStats& row = grid[k];
        row.spent = t;
        row.mean_best = sum / reps;
        if (traces.size() > 1) {
            const double var =
                std::max(0.0, (sum_sq - sum * sum / reps) / (reps - 1.0));
            row.stderr_best = std::sqrt(var / reps);
        }
        row.mean_samples = samples / reps;
    }
    return grid;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing: " + path);
}

std::string cell_label(const ExperimentConfig& config, double step, const std::string& policy) {
    return benchmark_name(config.function) + "_noise" + format_double(config.noise) + "_step" +
           format_double(step) + "_" + policy;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string PolicySpec::label() const {
    switch (kind) {
        case Kind::Reactive: return "reactive";
        case Kind::Fixed: return "fixed" + std::to_string(fixed_n);
        case Kind::Ssm: return "ssm";
    }
    return "policy";
}

std::unique_ptr<ComparisonPolicy> PolicySpec::instantiate() const {
    switch (kind) {
        case Kind::Reactive: return std::make_unique<ReactivePolicy>(guard);
        case Kind::Fixed: return std::make_unique<FixedPolicy>(fixed_n);
        case Kind::Ssm: return std::make_unique<SsmPolicy>(ssm);
    }
    throw std::logic_error("unknown policy kind");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::map<std::string, int> seen;  // first line of each single-valued key
    bool has_function = false, has_noise = false, has_budget = false, has_macroreps = false,
         has_seed = false;

    std::istringstream in(text);
    std::string raw_line;
    int line = 0;
    while (std::getline(in, raw_line)) {
        ++line;
        const auto hash = raw_line.find('#');
        if (hash != std::string::npos) raw_line.erase(hash);
        const std::string content = trim(raw_line);
        if (content.empty()) continue;

        const auto eq = content.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (value.empty()) fail(line, "empty value for " + key);

        if (key != "policy") {
            const auto it = seen.find(key);
            if (it != seen.end())
                fail(line, "duplicate key '" + key + "' (first set on line " +
                               std::to_string(it->second) + ")");
            seen[key] = line;
        }

        if (key == "function") {
            try {
                config.function = benchmark_from_name(value);
            } catch (const std::exception&) {
                fail(line, "unknown function '" + value + "'");
            }
            has_function = true;
        } else if (key == "dimension") {
            config.dimension = static_cast<int>(parse_unsigned(value, line, key));
            if (config.dimension < 1) fail(line, "dimension must be >= 1");
        } else if (key == "noise") {
            config.noise = parse_real(value, line, key);
            if (config.noise < 0.0) fail(line, "noise must be >= 0");
            has_noise = true;
        } else if (key == "steps") {
            config.steps.clear();
            for (const std::string& part : split(value, ',')) {
                const double step = parse_real(trim(part), line, key);
                if (!(step > 0.0 && step <= 1.0)) fail(line, "steps must lie in (0, 1]");
                config.steps.push_back(step);
            }
            if (config.steps.empty()) fail(line, "steps must list at least one value");
        } else if (key == "policy") {
            config.policies.push_back(parse_policy(value, line));
        } else if (key == "budget") {
            config.budget = parse_unsigned(value, line, key);
            if (config.budget < 1) fail(line, "budget must be >= 1");
            has_budget = true;
        } else if (key == "macroreps") {
            config.macroreps = static_cast<int>(parse_unsigned(value, line, key));
            if (config.macroreps < 1) fail(line, "macroreps must be >= 1");
            has_macroreps = true;
        } else if (key == "seed") {
            config.seed = parse_unsigned(value, line, key);
            has_seed = true;
        } else if (key == "stride") {
            config.stride = parse_unsigned(value, line, key);
            if (config.stride < 1) fail(line, "stride must be >= 1");
        } else if (key == "out") {
            config.out_dir = value;
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (!has_function) throw ConfigError("config is missing required key 'function'");
    if (!has_noise) throw ConfigError("config is missing required key 'noise'");
    if (config.policies.empty()) throw ConfigError("config is missing required key 'policy'");
    if (!has_budget) throw ConfigError("config is missing required key 'budget'");
    if (!has_macroreps) throw ConfigError("config is missing required key 'macroreps'");
    if (!has_seed) throw ConfigError("config is missing required key 'seed'");
    if (config.steps.empty()) config.steps.push_back(1.0);
    if (config.function == BenchmarkFunction::Rosenbrock && config.dimension < 2)
        throw ConfigError("rosenbrock requires dimension >= 2");
    return config;
}

std::vector<CellFiles> run_experiment(const ExperimentConfig& config, int threads) {
    namespace fs = std::filesystem;
    if (threads < 1) threads = 1;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);

    const BenchmarkSpec spec{config.function, config.dimension, config.noise};
    const Box domain = benchmark_domain(config.function, config.dimension);

    // Policies with colliding labels get an ordinal suffix.
    std::vector<std::string> labels;
    for (const PolicySpec& policy : config.policies) labels.push_back(policy.label());
    std::map<std::string, int> uses;
    for (std::string& label : labels) uses[label] += 1;
    std::map<std::string, int> counter;
    for (std::string& label : labels)
        if (uses[label] > 1) label += "_" + std::to_string(++counter[label]);

    std::vector<CellFiles> outputs;
    for (const double step : config.steps) {
        for (std::size_t p = 0; p < config.policies.size(); ++p) {
            const PolicySpec& policy = config.policies[p];
            SearchParams params;
            params.step_size = step;
            params.domain = domain;
            params.budget = config.budget;
            params.direction = Direction::Minimize;

            std::vector<std::vector<TracePoint>> traces(
                static_cast<std::size_t>(config.macroreps));
            const int workers = std::min(threads, config.macroreps);
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w]() {
                    for (int m = w; m < config.macroreps; m += workers) {
                        const StochasticObjective objective = make_objective(spec);
                        const auto runner = policy.instantiate();
                        traces[static_cast<std::size_t>(m)] = run_search(
                            objective, *runner, params,
                            child_seed(config.seed, static_cast<std::uint64_t>(m)));
                    }
                });
            }
            for (std::thread& worker : pool) worker.join();

            std::string raw = std::string(kRawHeader) + "\n";
            for (std::size_t m = 0; m < traces.size(); ++m) {
                for (const TracePoint& point : traces[m]) {
                    raw += std::to_string(m);
                    raw += ',';
                    raw += std::to_string(point.spent);
                    raw += ',';
                    raw += format_double(point.best_noiseless);
                    raw += ',';
                    raw += std::to_string(point.comparison_samples);
                    raw += '\n';
                }
            }

            std::string agg = std::string(kAggregateHeader) + "\n";
            for (const CheckpointStats& row :
                 aggregate_traces(traces, config.budget, config.stride)) {
                agg += std::to_string(row.spent);
                agg += ',';
                agg += format_double(row.mean_best);
                agg += ',';
                agg += format_double(row.stderr_best);
                agg += ',';
                agg += format_double(row.mean_samples);
                agg += '\n';
            }

            CellFiles cell;
            cell.label = cell_label(config, step, labels[p]);
            cell.raw_path = (fs::path(config.out_dir) / ("raw_" + cell.label + ".csv")).string();
            cell.aggregate_path =
                (fs::path(config.out_dir) / ("agg_" + cell.label + ".csv")).string();
            write_file(cell.raw_path, raw);
            write_file(cell.aggregate_path, agg);
            outputs.push_back(std::move(cell));
        }
    }
    return outputs;
}

std::vector<SummaryRow> summarize(const std::vector<std::string>& aggregate_paths) {
    if (aggregate_paths.empty()) throw std::invalid_argument("summarize: no aggregate files");
    std::vector<SummaryRow> rows;
    for (const std::string& path : aggregate_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open aggregate file: " + path);
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("empty aggregate file: " + path);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != kAggregateHeader)
            throw std::runtime_error("schema mismatch in " + path + ": unexpected header '" +
                                     line + "'");
        SummaryRow row;
        row.source = path;
        bool any = false;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const std::vector<std::string> fields = split(line, ',');
            if (fields.size() != 4)
                throw std::runtime_error("schema mismatch in " + path + ": bad row '" + line + "'");
            row.final_mean_best = std::stod(fields[1]);
            row.final_stderr_best = std::stod(fields[2]);
            row.mean_comparison_samples = std::stod(fields[3]);
            any = true;
        }
        if (!any) throw std::runtime_error("aggregate file has no rows: " + path);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_summary(const std::vector<SummaryRow>& rows) {
    std::string out = "source,final_mean_best,final_stderr,mean_comparison_samples\n";
    for (const SummaryRow& row : rows) {
        out += row.source;
        out += ',';
        out += format_double(row.final_mean_best);
        out += ',';
        out += format_double(row.final_stderr_best);
        out += ',';
        out += format_double(row.mean_comparison_samples);
        out += '\n';
    }
    return out;
}

}  // namespace rsopt
