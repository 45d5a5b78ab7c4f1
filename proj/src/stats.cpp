#include "rsopt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsopt {

namespace {

// std::lgamma writes the global signgam, which is a data race when
// macroreplications run in parallel; the reentrant form is race-free.
double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__APPLE__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// Regularized incomplete beta function I_x(a, b) via the modified Lentz
// continued fraction. Converges to machine precision for the (a, b) ranges
// used here (b = 1/2, a = dof/2 up to ~10^6).
double ibeta_reg(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // Use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) to stay in the region of
    // fast convergence.
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - ibeta_reg(b, a, 1.0 - x);

    const double log_prefix =
        a * std::log(x) + b * std::log1p(-x) - (log_gamma(a) + log_gamma(b) - log_gamma(a + b));

    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    constexpr int kMaxIter = 500000;

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(log_prefix) * h / a;
}

double t_pdf(double x, int dof) {
    const double v = static_cast<double>(dof);
    const double log_norm = log_gamma((v + 1.0) / 2.0) - log_gamma(v / 2.0) -
                            0.5 * std::log(v * M_PI);
    return std::exp(log_norm - 0.5 * (v + 1.0) * std::log1p(x * x / v));
}

}  // namespace

double t_cdf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("t_cdf: degrees of freedom must be >= 1");
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 0.5;
    const double v = static_cast<double>(dof);
    const double tail = 0.5 * ibeta_reg(v / 2.0, 0.5, v / (v + x * x));
    return x > 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, int dof) {
    if (dof < 1) throw std::invalid_argument("t_quantile: degrees of freedom must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("t_quantile: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    // Solve for the upper half and mirror; t_cdf(q, v) with q >= 0 covers p >= 0.5.
    const bool lower = p < 0.5;
    const double target = lower ? 1.0 - p : p;

    double lo = 0.0;
    double hi = 1.0;
    while (t_cdf(hi, dof) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) break;
    }

    double q = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = t_cdf(q, dof) - target;
        if (f > 0.0) {
            hi = q;
        } else {
            lo = q;
        }
        if (std::fabs(f) < 1e-13) break;
        const double deriv = t_pdf(q, dof);
        double next = q - f / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect when Newton escapes
        if (std::fabs(next - q) < 1e-14 * std::max(1.0, std::fabs(q))) {
            q = next;
            break;
        }
        q = next;
    }
    return lower ? -q : q;
}

PairedStats paired_stats(const PairedSample& sample) {
    const std::size_t n = sample.new_values.size();
    if (sample.current_values.size() != n)
        throw std::invalid_argument("paired_stats: series lengths differ");
    if (n < 2) throw std::invalid_argument("paired_stats: need at least two pairs");

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += sample.new_values[i] - sample.current_values[i];
    const double mean = sum / static_cast<double>(n);

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = sample.new_values[i] - sample.current_values[i] - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    PairedStats st;
    st.n = static_cast<int>(n);
    st.delta_observed = mean;
    st.s = sd + kStdDevFloor;
    st.delta_norm = st.delta_observed / st.s;
    return st;
}

double p_value(const PairedStats& stats, Tail tail) {
    if (stats.n < 2) throw std::invalid_argument("p_value: need at least two pairs");
    const double t = stats.delta_norm * std::sqrt(static_cast<double>(stats.n));
    const double cdf = t_cdf(t, stats.n - 1);
    return tail == Tail::Upper ? 1.0 - cdf : cdf;
}

double beta_approx(double delta_norm, int n, double alpha) {
    if (n < 2) throw std::invalid_argument("beta_approx: need n >= 2");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("beta_approx: alpha must lie in (0, 0.5)");
    if (delta_norm == 0.0) return 1.0;  // the two CDF terms cancel exactly

    const int dof = n - 1;
    const double t_crit = t_quantile(1.0 - alpha, dof);
    const double shift = std::fabs(delta_norm) * std::sqrt(static_cast<double>(n));
    const double beta = 1.0 - t_cdf(shift - t_crit, dof) + t_cdf(-shift - t_crit, dof);
    return std::clamp(beta, 0.0, 1.0);
}

int required_sample_size(double delta_norm, const ErrorRequirements& reqs, int n_floor) {
    if (delta_norm == 0.0)
        throw std::domain_error("required_sample_size: zero effect size has no finite solution");
    if (n_floor < 2) throw std::invalid_argument("required_sample_size: n_floor must be >= 2");
    if (!(reqs.alpha_req > 0.0 && reqs.alpha_req < 0.5))
        throw std::invalid_argument("required_sample_size: alpha_req must lie in (0, 0.5)");
    if (!(reqs.beta_req > 0.0 && reqs.beta_req < 1.0))
        throw std::invalid_argument("required_sample_size: beta_req must lie in (0, 1)");

    const double effect_sq = delta_norm * delta_norm;
    // Real-valued sample size demanded at a trial value of n; zero when the
    // two critical values cancel (requirements met by any sample).
    const auto demanded = [&](int n) -> double {
        const int dof = n - 1;
        const double sum = t_quantile(1.0 - reqs.alpha_req, dof) + t_quantile(1.0 - reqs.beta_req, dof);
        if (sum <= 0.0) return 0.0;
        return sum * sum / effect_sq;
    };

    int n = n_floor;
    for (int it = 0; it < 100; ++it) {
        const double need = demanded(n);
        int next = need <= static_cast<double>(kSampleSizeCap)
                       ? static_cast<int>(std::ceil(need))
                       : kSampleSizeCap;
        next = std::clamp(next, n_floor, kSampleSizeCap);
        if (next == n) break;
        n = next;
    }
    // The recurrence can settle one step away from the minimal solution;
    // demanded() is nonincreasing in n, so the satisfying set is an upward-
    // closed interval and local refinement reaches its least element.
    while (n < kSampleSizeCap && static_cast<double>(n) < demanded(n)) ++n;
    while (n > n_floor && static_cast<double>(n - 1) >= demanded(n - 1)) --n;
    return n;
}

}  // namespace rsopt
