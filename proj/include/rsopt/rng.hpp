#pragma once

#include <cstdint>

namespace rsopt {

// SplitMix64 finalizer. Bijective on 64-bit words; consecutive counters map to
// decorrelated outputs, which is what makes the counter-based streams work.
std::uint64_t mix64(std::uint64_t x);

// Standard normal quantile (Wichura's AS241 rational approximations,
// relative error below 1e-15 over (0, 1)).
double normal_quantile(double p);

// Standard normal CDF through erfc.
double normal_cdf(double x);

// Deterministic counter-based random source. The draw at (stream, index)
// depends only on the master seed and those two words, so any position can be
// regenerated at any time without storing generator state, and distinct
// streams are independent.
class SeedStream {
  public:
    explicit SeedStream(std::uint64_t master_seed) : master_(master_seed) {}

    // Uniform draw strictly inside (0, 1).
    double uniform(std::uint64_t stream, std::uint64_t index) const;
    // Standard normal draw (inverse-CDF transform of the uniform draw).
    double normal(std::uint64_t stream, std::uint64_t index) const;

    std::uint64_t master() const { return master_; }

  private:
    std::uint64_t master_;
};

// Stream id shared by every configuration under common random numbers.
inline constexpr std::uint64_t kCrnStream = 0;

// Child seed for macroreplication m of a master-seeded experiment.
std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace rsopt
