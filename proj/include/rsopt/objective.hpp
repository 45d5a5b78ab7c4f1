#pragma once

#include <functional>
#include <vector>

namespace rsopt {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Per-dimension closed intervals defining the feasible region.
using Box = std::vector<Interval>;

// A point in the decision space. Identity for caching purposes is the exact
// bit pattern of coords, not numeric equality.
struct Configuration {
    std::vector<double> coords;
};

bool in_box(const Configuration& config, const Box& domain);

// A stochastic objective F(x, z): mean(x) is the noiseless expectation f(x)
// and sample(x, z) realizes one noisy evaluation from a standard normal draw.
// sample must be deterministic in (x, z) and satisfy E_z[sample(x, z)] = mean(x).
struct StochasticObjective {
    std::function<double(const std::vector<double>&)> mean;
    std::function<double(const std::vector<double>&, double)> sample;
};

}  // namespace rsopt
