#pragma once

#include <cstddef>
#include <vector>

namespace rsopt {

// ---------------------------------------------------------------------------
// Student-t distribution
// ---------------------------------------------------------------------------

// Cumulative distribution function of the t-distribution with dof degrees of
// freedom. Computed through the regularized incomplete beta function
// (modified Lentz continued fraction); absolute error well below 1e-10.
double t_cdf(double x, int dof);

// Inverse of t_cdf in its first argument: the value q with t_cdf(q, dof) = p.
// Safeguarded Newton iteration on the CDF; |t_cdf(result) - p| < 1e-12.
double t_quantile(double p, int dof);

// ---------------------------------------------------------------------------
// Paired statistics
// ---------------------------------------------------------------------------

// Two equally long series of evaluations where position i of both sides was
// produced from the same random draw, so the pairwise differences carry the
// common-random-numbers variance reduction.
struct PairedSample {
    std::vector<double> new_values;
    std::vector<double> current_values;

    std::size_t size() const { return new_values.size(); }
};

// Added to the paired standard deviation so that normalizing by s is always
// well defined, even when every pairwise difference is identical.
inline constexpr double kStdDevFloor = 1e-12;

struct PairedStats {
    int n = 0;
    double delta_observed = 0.0;  // mean(new) - mean(current)
    double s = 0.0;               // sample std. dev. of differences + kStdDevFloor
    double delta_norm = 0.0;      // delta_observed / s
};

struct ErrorRequirements {
    double alpha_req = 0.0;  // type-I error bound, in (0, 0.5)
    double beta_req = 0.0;   // type-II error bound, in (0, 1)
};

enum class Tail { Upper, Lower };

// Mean, floored standard deviation and normalized difference of the pairwise
// differences new - current. Requires at least two pairs.
PairedStats paired_stats(const PairedSample& sample);

// One-tailed p-value of the paired t statistic delta_norm * sqrt(n) against a
// zero null difference. Upper tail rejects for large positive differences.
double p_value(const PairedStats& stats, Tail tail);

// Probability of failing to reject the zero-difference null when the true
// standardized effect is delta_norm, for a one-tailed test at level alpha.
// Shifted central-t approximation of the noncentral-t power; the sign of
// delta_norm is irrelevant. Result clamped to [0, 1].
double beta_approx(double delta_norm, int n, double alpha);

// Ceiling applied to required_sample_size so the recurrence always terminates.
inline constexpr int kSampleSizeCap = 10'000'000;

// Smallest n >= n_floor with n >= (t_{n-1,1-alpha} + t_{n-1,1-beta})^2 /
// delta_norm^2, located by iterating the recurrence from n_floor and refining
// to the minimal solution. Throws if delta_norm is zero (the caller is
// expected to have routed zero effects to a heuristic decision already).
int required_sample_size(double delta_norm, const ErrorRequirements& reqs, int n_floor);

}  // namespace rsopt
