#pragma once

#include <cstdint>
#include <vector>

#include "rsopt/policies.hpp"

namespace rsopt {

// Stream id of the search driver's own draws (initial point and proposals);
// distinct from the CRN stream and from any configuration stream.
inline constexpr std::uint64_t kSearchStream = 0x8a5cd789635d2dffULL;

// Sequential uniform draws from one counter-based stream.
class DrawSequence {
  public:
    DrawSequence(const SeedStream& streams, std::uint64_t stream)
        : streams_(&streams), stream_(stream) {}

    double next_uniform() { return streams_->uniform(stream_, next_++); }

  private:
    const SeedStream* streams_;
    std::uint64_t stream_;
    std::uint64_t next_ = 1;
};

struct SearchParams {
    double step_size = 1.0;  // fraction of the domain width; 1 makes the search global
    Box domain;
    std::uint64_t budget = 0;
    Direction direction = Direction::Minimize;
};

// One trace entry per resolved comparison (plus the initial point at spent 0):
// budget spent so far, noiseless value of the incumbent, and the sample size
// the comparison used.
struct TracePoint {
    std::uint64_t spent = 0;
    double best_noiseless = 0.0;
    int comparison_samples = 0;
};

// Uniform draw from the step-size box around the incumbent, clamped to the
// domain by interval intersection.
Configuration propose(const Configuration& incumbent, const Box& domain, double step_size,
                      DrawSequence& draws);

Configuration uniform_configuration(const Box& domain, DrawSequence& draws);

// Random local search: start from a uniform point, repeatedly propose within
// the step-size box and let the comparison policy pick the survivor, until
// the evaluation budget is gone.
std::vector<TracePoint> run_search(const StochasticObjective& objective,
                                   ComparisonPolicy& policy, const SearchParams& params,
                                   std::uint64_t master_seed);

}  // namespace rsopt
