#pragma once

#include <algorithm>
#include <memory>
#include <optional>

#include "rsopt/oracle.hpp"
#include "rsopt/stats.hpp"

namespace rsopt {

enum class Direction { Minimize, Maximize };

// Tail of the one-sided test that rejects when the challenger is better.
inline Tail tail_for(Direction direction) {
    return direction == Direction::Maximize ? Tail::Upper : Tail::Lower;
}

// Strictly better in the optimization direction.
inline bool better(double a, double b, Direction direction) {
    return direction == Direction::Maximize ? a > b : a < b;
}

struct GuardParams {
    double alpha_req = 0.1;      // required type-I error probability
    double beta_req = 0.4;       // required type-II error probability
    double delta_fraction = 0.01;  // indifference zone, as a fraction of the incumbent estimate
    int n_min = 2;
    std::optional<int> n_max;    // nullopt: unbounded

    ErrorRequirements requirements() const { return {alpha_req, beta_req}; }
};

// Running floor on the sample sizes of heuristic decisions. Shared by every
// comparison of one search run; never decreases.
struct ComparisonState {
    int n_current = 0;
};

enum class Winner { Challenger, Incumbent };

enum class Resolution { Statistical, Heuristic, BudgetTruncated };

struct Decision {
    Winner winner = Winner::Incumbent;
    Resolution resolution = Resolution::Heuristic;
    int samples_challenger = 0;
    int samples_incumbent = 0;

    int samples_used() const { return std::max(samples_challenger, samples_incumbent); }
};

struct SSMParams {
    double alpha = 0.1;  // allowed probability of incorrect selection
    double delta = 0.01;  // indifference-zone parameter, in objective units
    int n0 = 2;          // first-stage sample size
    int c = 1;           // slope divisor of the continuation region
};

// Checks whether the paired evidence already supports a statistically
// significant decision: resolved when the type-II error estimate meets
// beta_req, with the challenger winning iff the p-value meets alpha_req.
// A challenger win raises state.n_current to the deciding sample size.
std::optional<Decision> statistical_guard(const PairedSample& sample, const GuardParams& params,
                                          ComparisonState& state, Direction direction);

// Reactive sample-size comparison. Grows a common-random-numbers paired
// sample one evaluation at a time, running the guard after every extension,
// aiming for the sample size that meets both error requirements, and routes
// near-indifferent effects to a mean comparison at the running floor.
Decision reactive_compare(CrnOracle& oracle, const Configuration& challenger,
                          const Configuration& incumbent, const GuardParams& params,
                          ComparisonState& state, Direction direction);

// Brings both configurations to n paired evaluations and keeps the challenger
// only if its estimate is strictly better; ties retain the incumbent.
Decision fixed_compare(CrnOracle& oracle, const Configuration& challenger,
                       const Configuration& incumbent, int n, Direction direction);

// Sequential selection with memory: fully-sequential pairwise elimination
// with independent sampling. The cumulative difference of one observation
// per stage is followed until it exits a triangular continuation region or
// the region closes, in which case the better mean wins.
Decision ssm_compare(CrnOracle& oracle, const Configuration& challenger,
                     const Configuration& incumbent, const SSMParams& params,
                     Direction direction);

// ---------------------------------------------------------------------------
// Policy objects for the search driver
// ---------------------------------------------------------------------------

class ComparisonPolicy {
  public:
    virtual ~ComparisonPolicy() = default;
    virtual Decision compare(CrnOracle& oracle, const Configuration& challenger,
                             const Configuration& incumbent, Direction direction) = 0;
};

class ReactivePolicy final : public ComparisonPolicy {
  public:
    explicit ReactivePolicy(GuardParams params) : params_(params) {}

    Decision compare(CrnOracle& oracle, const Configuration& challenger,
                     const Configuration& incumbent, Direction direction) override {
        return reactive_compare(oracle, challenger, incumbent, params_, state_, direction);
    }

    const ComparisonState& state() const { return state_; }

  private:
    GuardParams params_;
    ComparisonState state_;
};

class FixedPolicy final : public ComparisonPolicy {
  public:
    explicit FixedPolicy(int n) : n_(n) {}

    Decision compare(CrnOracle& oracle, const Configuration& challenger,
                     const Configuration& incumbent, Direction direction) override {
        return fixed_compare(oracle, challenger, incumbent, n_, direction);
    }

  private:
    int n_;
};

class SsmPolicy final : public ComparisonPolicy {
  public:
    explicit SsmPolicy(SSMParams params) : params_(params) {}

    Decision compare(CrnOracle& oracle, const Configuration& challenger,
                     const Configuration& incumbent, Direction direction) override {
        return ssm_compare(oracle, challenger, incumbent, params_, direction);
    }

  private:
    SSMParams params_;
};

}  // namespace rsopt
