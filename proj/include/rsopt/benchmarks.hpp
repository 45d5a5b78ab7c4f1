#pragma once

#include <string>
#include <vector>

#include "rsopt/objective.hpp"

namespace rsopt {

enum class BenchmarkFunction { Rastrigin, Griewank, Rosenbrock };

BenchmarkFunction benchmark_from_name(const std::string& name);
std::string benchmark_name(BenchmarkFunction function);

// 10 d + sum(x_i^2 - 10 cos(2 pi x_i)); global minimum 0 at the origin.
double rastrigin(const std::vector<double>& x);
// sum(x_i^2) / 4000 - prod(cos(x_i / sqrt(i))) + 1; global minimum 0 at the origin.
double griewank(const std::vector<double>& x);
// sum over i < d of 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2; global minimum 0 at
// the all-ones point. Needs at least two dimensions.
double rosenbrock(const std::vector<double>& x);

struct BenchmarkSpec {
    BenchmarkFunction function = BenchmarkFunction::Griewank;
    int dimension = 10;
    double noise_fraction = 0.0;  // p >= 0
};

// The conventional search domain of each function, replicated per dimension:
// [-5.12, 5.12] for Rastrigin, [-600, 600] for Griewank, [-5, 5] for Rosenbrock.
Box benchmark_domain(BenchmarkFunction function, int dimension);

double benchmark_value(BenchmarkFunction function, const std::vector<double>& x);

// One noisy realization f(x) + p |f(x)| z for a standard normal draw z.
double noisy(const BenchmarkSpec& spec, const std::vector<double>& x, double z);

StochasticObjective make_objective(const BenchmarkSpec& spec);

}  // namespace rsopt
