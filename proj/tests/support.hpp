// Test-only reference implementations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testref {

// t CDF closed form for 1 degree of freedom.
inline double t_cdf_dof1(double x) { return 0.5 + std::atan(x) / M_PI; }

// t CDF closed form for 2 degrees of freedom.
inline double t_cdf_dof2(double x) { return 0.5 + x / (2.0 * std::sqrt(2.0 + x * x)); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (const double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (const double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Monte-Carlo estimate of the type-II error of the one-sided paired t-test:
// draws pairwise differences with true standardized effect, applies the test
// at the critical value t_crit, and counts non-rejections.
inline double mc_beta(double effect, int n, double t_crit, int replications,
                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(effect, 1.0);
    int kept = 0;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int rep = 0; rep < replications; ++rep) {
        for (double& x : d) x = normal(rng);
        const double m = mean(d);
        const double sd = sample_sd(d);
        const double t = m * std::sqrt(static_cast<double>(n)) / sd;
        if (t <= t_crit) ++kept;
    }
    return static_cast<double>(kept) / static_cast<double>(replications);
}

// Kolmogorov-Smirnov statistic of values against the uniform distribution on
// [lo, hi]. Values are copied and sorted.
inline double ks_uniform(std::vector<double> values, double lo, double hi) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double cdf = (values[i] - lo) / (hi - lo);
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

inline double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

}  // namespace testref
