#include "rsopt/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace rsopt {

Configuration uniform_configuration(const Box& domain, DrawSequence& draws) {
    Configuration config;
    config.coords.reserve(domain.size());
    for (const Interval& iv : domain)
        config.coords.push_back(iv.lo + draws.next_uniform() * iv.width());
    return config;
}

Configuration propose(const Configuration& incumbent, const Box& domain, double step_size,
                      DrawSequence& draws) {
    if (!(step_size > 0.0 && step_size <= 1.0))
        throw std::invalid_argument("propose: step size must lie in (0, 1]");
    if (incumbent.coords.size() != domain.size())
        throw std::invalid_argument("propose: incumbent dimension does not match the domain");

    Configuration proposal;
    proposal.coords.reserve(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
        const Interval& iv = domain[i];
        const double half = 0.5 * step_size * iv.width();
        const double lo = std::max(iv.lo, incumbent.coords[i] - half);
        const double hi = std::min(iv.hi, incumbent.coords[i] + half);
        proposal.coords.push_back(lo + draws.next_uniform() * (hi - lo));
    }
    return proposal;
}

std::vector<TracePoint> run_search(const StochasticObjective& objective,
                                   ComparisonPolicy& policy, const SearchParams& params,
                                   std::uint64_t master_seed) {
    CrnOracle oracle(objective, master_seed, params.budget);
    DrawSequence draws(oracle.streams(), kSearchStream);

    Configuration best = uniform_configuration(params.domain, draws);

    std::vector<TracePoint> trace;
    trace.push_back({0, oracle.noiseless_value(best), 0});

    int identical_proposals = 0;
    while (oracle.ledger().spent < oracle.ledger().total) {
        Configuration candidate = propose(best, params.domain, params.step_size, draws);
        if (candidate.coords == best.coords) {
            // Re-proposal advances the stream; bail out if the domain is so
            // degenerate that nothing new can ever be drawn.
            if (++identical_proposals >= 100) break;
            continue;
        }
        identical_proposals = 0;

        const Decision decision = policy.compare(oracle, candidate, best, params.direction);
        if (decision.winner == Winner::Challenger) best = std::move(candidate);
        trace.push_back(
            {oracle.ledger().spent, oracle.noiseless_value(best), decision.samples_used()});
        if (decision.resolution == Resolution::BudgetTruncated) break;
    }
    return trace;
}

}  // namespace rsopt
