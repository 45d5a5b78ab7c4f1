#include "rsopt/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace rsopt {

BenchmarkFunction benchmark_from_name(const std::string& name) {
    if (name == "rastrigin") return BenchmarkFunction::Rastrigin;
    if (name == "griewank") return BenchmarkFunction::Griewank;
    if (name == "rosenbrock") return BenchmarkFunction::Rosenbrock;
    throw std::invalid_argument("unknown benchmark function: " + name);
}

std::string benchmark_name(BenchmarkFunction function) {
    switch (function) {
        case BenchmarkFunction::Rastrigin: return "rastrigin";
        case BenchmarkFunction::Griewank: return "griewank";
        case BenchmarkFunction::Rosenbrock: return "rosenbrock";
    }
    throw std::invalid_argument("unknown benchmark function");
}

double rastrigin(const std::vector<double>& x) {
    double sum = 10.0 * static_cast<double>(x.size());
    for (const double xi : x) sum += xi * xi - 10.0 * std::cos(2.0 * M_PI * xi);
    return sum;
}

double griewank(const std::vector<double>& x) {
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i] / 4000.0;
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum - prod + 1.0;
}

double rosenbrock(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("rosenbrock: needs at least two dimensions");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

Box benchmark_domain(BenchmarkFunction function, int dimension) {
    if (dimension < 1) throw std::invalid_argument("benchmark_domain: dimension must be >= 1");
    Interval iv;
    switch (function) {
        case BenchmarkFunction::Rastrigin: iv = {-5.12, 5.12}; break;
        case BenchmarkFunction::Griewank: iv = {-600.0, 600.0}; break;
        case BenchmarkFunction::Rosenbrock: iv = {-5.0, 5.0}; break;
    }
    return Box(static_cast<std::size_t>(dimension), iv);
}

double benchmark_value(BenchmarkFunction function, const std::vector<double>& x) {
    switch (function) {
        case BenchmarkFunction::Rastrigin: return rastrigin(x);
        case BenchmarkFunction::Griewank: return griewank(x);
        case BenchmarkFunction::Rosenbrock: return rosenbrock(x);
    }
    throw std::invalid_argument("unknown benchmark function");
}

double noisy(const BenchmarkSpec& spec, const std::vector<double>& x, double z) {
    const double f = benchmark_value(spec.function, x);
    return f + spec.noise_fraction * std::fabs(f) * z;
}

StochasticObjective make_objective(const BenchmarkSpec& spec) {
    StochasticObjective obj;
    obj.mean = [spec](const std::vector<double>& x) { return benchmark_value(spec.function, x); };
    obj.sample = [spec](const std::vector<double>& x, double z) { return noisy(spec, x, z); };
    return obj;
}

}  // namespace rsopt
