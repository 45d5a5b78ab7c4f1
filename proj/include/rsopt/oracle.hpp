#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rsopt/objective.hpp"
#include "rsopt/rng.hpp"

namespace rsopt {

// Thrown when a fresh evaluation is requested with the budget fully spent.
// Comparison policies catch it and resolve on the samples gathered so far.
struct BudgetExhausted : std::runtime_error {
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

struct BudgetLedger {
    std::uint64_t total = 0;
    std::uint64_t spent = 0;

    std::uint64_t remaining() const { return total - spent; }
};

// How the noise draw for a fresh evaluation is chosen: under Crn every
// configuration shares one seed stream so that position i of any two records
// was produced from the same draw; under Independent each configuration owns
// a disjoint stream.
enum class Regime { Crn, Independent };

// 64-bit stream id derived from the configuration's exact coordinate bits.
std::uint64_t config_stream_id(const Configuration& config);

// Evaluation cache plus budget accounting for one optimization run. Records
// are append-only: position i always holds F(x, xi_i) for seed position i,
// so prefixes of a record never change once written.
class CrnOracle {
  public:
    CrnOracle(StochasticObjective objective, std::uint64_t master_seed, std::uint64_t budget)
        : objective_(std::move(objective)), streams_(master_seed), ledger_{budget, 0} {}

    // Value of F(x, xi_i) at 1-based seed position i. Recorded positions are
    // returned from memory at zero cost; a fresh position must extend the
    // record by exactly one and costs one unit of budget.
    double evaluate(const Configuration& config, std::size_t seed_index, Regime regime);

    // The configuration's record grown to at least n entries. The reference
    // stays valid while the oracle lives; only its tail may grow.
    const std::vector<double>& sample_prefix(const Configuration& config, std::size_t n,
                                             Regime regime);

    // f(x) with zero noise. Scoring channel only: comparison policies never
    // see it, and it does not touch the budget.
    double noiseless_value(const Configuration& config) const;

    std::size_t recorded_count(const Configuration& config) const;
    const std::vector<double>& recorded(const Configuration& config) const;

    const BudgetLedger& ledger() const { return ledger_; }
    const SeedStream& streams() const { return streams_; }

  private:
    static std::string memory_key(const Configuration& config);

    StochasticObjective objective_;
    SeedStream streams_;
    BudgetLedger ledger_;
    std::unordered_map<std::string, std::vector<double>> memory_;
};

}  // namespace rsopt
