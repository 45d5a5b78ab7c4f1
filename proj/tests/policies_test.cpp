#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>

#include "rsopt/benchmarks.hpp"
#include "rsopt/policies.hpp"
#include "rsopt/search.hpp"
#include "support.hpp"

using namespace rsopt;

namespace {

// mean x[0], noise sd |x[1]|; the sign of x[1] controls how strongly the CRN
// draw cancels in paired differences.
StochasticObjective linear_gauss() {
    StochasticObjective obj;
    obj.mean = [](const std::vector<double>& x) { return x[0]; };
    obj.sample = [](const std::vector<double>& x, double z) { return x[0] + x[1] * z; };
    return obj;
}

Configuration point(double mean, double amp) { return Configuration{{mean, amp}}; }

PairedSample shifted_sample(double shift, int n) {
    // differences shift + jitter with sample sd close to 1
    PairedSample sample;
    for (int i = 0; i < n; ++i) {
        const double base = 0.1 * i;
        const double jitter = (i % 2 == 0 ? 1.0 : -1.0) * 0.55;
        sample.current_values.push_back(base);
        sample.new_values.push_back(base + shift + jitter);
    }
    return sample;
}

// Replays fixed per-configuration value sequences keyed by x[0], ignoring the
// draw; the oracle's memory guarantees each position is sampled once.
StochasticObjective scripted(std::map<double, std::vector<double>> scripts) {
    auto counters = std::make_shared<std::map<double, std::size_t>>();
    auto data = std::make_shared<std::map<double, std::vector<double>>>(std::move(scripts));
    StochasticObjective obj;
    obj.mean = [data](const std::vector<double>& x) { return data->at(x[0]).front(); };
    obj.sample = [counters, data](const std::vector<double>& x, double) {
        const auto& values = data->at(x[0]);
        std::size_t& next = (*counters)[x[0]];
        const double value = values.at(std::min(next, values.size() - 1));
        ++next;
        return value;
    };
    return obj;
}

}  // namespace

TEST_CASE("statistical guard resolves decisive evidence and skips weak evidence") {
    const GuardParams params{0.1, 0.4, 0.01, 2, std::nullopt};

    ComparisonState state;
    const auto win = statistical_guard(shifted_sample(10.0, 10), params, state, Direction::Maximize);
    REQUIRE(win.has_value());
    CHECK(win->winner == Winner::Challenger);
    CHECK(win->resolution == Resolution::Statistical);
    CHECK(win->samples_challenger == 10);
    CHECK(state.n_current == 10);  // challenger win raises the floor

    ComparisonState fresh;
    PairedSample ties;
    ties.new_values = {4.0, 4.0, 4.0};
    ties.current_values = {4.0, 4.0, 4.0};
    CHECK_FALSE(statistical_guard(ties, params, fresh, Direction::Maximize).has_value());
    CHECK(fresh.n_current == 0);

    const auto lose =
        statistical_guard(shifted_sample(-10.0, 10), params, fresh, Direction::Maximize);
    REQUIRE(lose.has_value());
    CHECK(lose->winner == Winner::Incumbent);
    CHECK(fresh.n_current == 0);  // incumbent wins do not raise the floor

    // same evidence, opposite direction
    const auto mirrored =
        statistical_guard(shifted_sample(-10.0, 10), params, fresh, Direction::Minimize);
    REQUIRE(mirrored.has_value());
    CHECK(mirrored->winner == Winner::Challenger);
}

TEST_CASE("reactive resolves an overwhelming shift at n_min") {
    CrnOracle oracle(linear_gauss(), 42, 1000);
    const GuardParams params{0.1, 0.4, 0.01, 2, std::nullopt};
    ComparisonState state;
    // identical draws (same amp and sign) shifted by +1000: differences are
    // exactly constant, so the first guard check decides
    const Decision d = reactive_compare(oracle, point(1000.0, 1.0), point(0.0, 1.0), params,
                                        state, Direction::Maximize);
    CHECK(d.winner == Winner::Challenger);
    CHECK(d.resolution == Resolution::Statistical);
    CHECK(d.samples_challenger == params.n_min);
    CHECK(d.samples_incumbent == params.n_min);
    CHECK(oracle.ledger().spent == 2 * static_cast<std::uint64_t>(params.n_min));
    CHECK(state.n_current == params.n_min);
}

TEST_CASE("reactive routes near-ties to the heuristic at max(n_min, n_current)") {
    const GuardParams params{0.1, 0.4, 0.5, 2, std::nullopt};  // wide indifference zone

    // near-identical estimates around 100: normalized difference is tiny
    // against an indifference threshold of half the incumbent estimate
    const std::map<double, std::vector<double>> values{
        {0.0, {100.3, 99.8, 100.0, 100.0, 100.0, 100.0, 100.0}},   // incumbent
        {1.0, {100.6, 99.6, 100.0, 100.0, 100.0, 100.0, 100.0}}};  // challenger

    CrnOracle oracle(scripted(values), 7, 1000);
    ComparisonState state;
    const Decision d = reactive_compare(oracle, point(1.0, 0.0), point(0.0, 0.0), params, state,
                                        Direction::Minimize);
    CHECK(d.resolution == Resolution::Heuristic);
    CHECK(d.winner == Winner::Incumbent);  // challenger mean 100.1 vs incumbent 100.05
    CHECK(d.samples_challenger == params.n_min);
    CHECK(d.samples_incumbent == params.n_min);
    CHECK(state.n_current == params.n_min);

    // with a pre-existing floor the challenger is topped up to it
    CrnOracle warm(scripted(values), 8, 1000);
    ComparisonState floored;
    floored.n_current = 7;
    const Decision topped =
        reactive_compare(warm, point(1.0, 0.0), point(0.0, 0.0), params, floored,
                         Direction::Minimize);
    CHECK(topped.resolution == Resolution::Heuristic);
    CHECK(topped.samples_challenger == 7);
    CHECK(topped.samples_incumbent == params.n_min);  // only two paired positions exist
    CHECK(floored.n_current == 7);
}

TEST_CASE("reactive statistical decisions satisfy the recorded error requirements") {
    const GuardParams params{0.1, 0.4, 0.01, 2, std::nullopt};
    int statistical_seen = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        CrnOracle oracle(linear_gauss(), 9000 + trial, 100000);
        ComparisonState state;
        const Configuration challenger = point(trial % 2 == 0 ? 0.7 : 1.3, 0.5);
        const Configuration incumbent = point(1.0, -0.5);
        const Decision d =
            reactive_compare(oracle, challenger, incumbent, params, state, Direction::Minimize);
        if (d.resolution != Resolution::Statistical) continue;
        ++statistical_seen;

        const int window = d.samples_incumbent;
        PairedSample sample;
        const auto& cha = oracle.recorded(challenger);
        const auto& inc = oracle.recorded(incumbent);
        sample.new_values.assign(cha.begin(), cha.begin() + window);
        sample.current_values.assign(inc.begin(), inc.begin() + window);
        const PairedStats st = paired_stats(sample);
        CHECK(beta_approx(st.delta_norm, st.n, params.alpha_req) <= params.beta_req);
        if (d.winner == Winner::Challenger)
            CHECK(p_value(st, tail_for(Direction::Minimize)) <= params.alpha_req);
        CHECK(d.samples_challenger >= params.n_min);
    }
    CHECK(statistical_seen > 60);
}

TEST_CASE("reactive n_current never decreases across comparisons") {
    const GuardParams params{0.1, 0.4, 0.05, 2, std::nullopt};
    CrnOracle oracle(linear_gauss(), 17, 100000);
    ComparisonState state;
    int previous_floor = 0;
    Configuration incumbent = point(1.0, -0.5);
    for (int k = 0; k < 40; ++k) {
        const Configuration challenger = point(1.0 + 0.001 * k, 0.5);
        const Decision d =
            reactive_compare(oracle, challenger, incumbent, params, state, Direction::Minimize);
        CHECK(state.n_current >= previous_floor);
        previous_floor = state.n_current;
        if (d.winner == Winner::Challenger) incumbent = challenger;
    }
    CHECK(previous_floor >= params.n_min);
}

TEST_CASE("reactive paired window grows without redrawing positions") {
    const GuardParams params{0.1, 0.4, 0.01, 2, std::nullopt};
    CrnOracle oracle(linear_gauss(), 23, 100000);
    ComparisonState state;
    const Configuration incumbent = point(1.0, -0.5);
    reactive_compare(oracle, point(1.05, 0.5), incumbent, params, state, Direction::Minimize);
    const std::vector<double> snapshot = oracle.recorded(incumbent);

    reactive_compare(oracle, point(0.95, 0.5), incumbent, params, state, Direction::Minimize);
    const auto& after = oracle.recorded(incumbent);
    REQUIRE(after.size() >= snapshot.size());
    for (std::size_t i = 0; i < snapshot.size(); ++i) CHECK(after[i] == snapshot[i]);
}

TEST_CASE("reactive respects n_max") {
    // moderate advantage (normalized difference about -0.5) that never meets
    // the type-II requirement before the cap: heuristic decision at n_max
    const GuardParams params{0.1, 0.4, 0.0, 2, 6};
    const std::map<double, std::vector<double>> values{
        {0.0, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}},         // incumbent
        {1.0, {0.25, 1.25, 0.25, 1.25, 0.25, 1.25, 0.25, 1.25}}};  // challenger
    CrnOracle oracle(scripted(values), 29, 100000);
    ComparisonState state;
    const Decision d = reactive_compare(oracle, point(1.0, 0.0), point(0.0, 0.0), params, state,
                                        Direction::Minimize);
    CHECK(d.resolution == Resolution::Heuristic);
    CHECK(d.winner == Winner::Challenger);  // mean 0.75 beats 1.0 when minimizing
    CHECK(d.samples_challenger == 6);
    CHECK(d.samples_incumbent == 6);
    CHECK(state.n_current == 6);
}

TEST_CASE("reactive truncates cleanly when the budget dies mid-comparison") {
    const GuardParams params{0.1, 0.4, 0.01, 2, std::nullopt};
    CrnOracle oracle(linear_gauss(), 3, 3);
    ComparisonState state;
    const Decision d = reactive_compare(oracle, point(0.5, 0.5), point(0.0, -0.5), params, state,
                                        Direction::Minimize);
    CHECK(d.resolution == Resolution::BudgetTruncated);
    CHECK(oracle.ledger().spent == 3);
    CHECK(d.samples_challenger + d.samples_incumbent <= 4);
    CHECK(state.n_current == 0);  // truncated decisions do not move the floor
}

TEST_CASE("reactive empirical error rate: strong effects, both roles") {
    // true means 0 and 1, per-configuration noise sd 0.1 (imperfectly paired)
    const GuardParams params{0.1, 0.4, 0.01, 2, std::nullopt};
    int mean0_wins_as_challenger = 0;
    int mean0_wins_as_incumbent = 0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        CrnOracle oracle(linear_gauss(), 100000 + trial, 10000);
        ComparisonState state;
        const Decision d = reactive_compare(oracle, point(0.0, 0.1), point(1.0, -0.1), params,
                                            state, Direction::Minimize);
        if (d.winner == Winner::Challenger) ++mean0_wins_as_challenger;

        CrnOracle mirror(linear_gauss(), 200000 + trial, 10000);
        ComparisonState mirror_state;
        const Decision m = reactive_compare(mirror, point(1.0, 0.1), point(0.0, -0.1), params,
                                            mirror_state, Direction::Minimize);
        if (m.winner == Winner::Incumbent) ++mean0_wins_as_incumbent;
    }
    CHECK(mean0_wins_as_challenger >= 950);
    CHECK(mean0_wins_as_incumbent >= 950);
}

TEST_CASE("reactive direction symmetry") {
    const GuardParams params{0.1, 0.4, 0.02, 2, std::nullopt};
    StochasticObjective negated;
    negated.mean = [](const std::vector<double>& x) { return -x[0]; };
    negated.sample = [](const std::vector<double>& x, double z) { return -(x[0] + x[1] * z); };

    CrnOracle down(linear_gauss(), 1234, 5000);
    CrnOracle up(negated, 1234, 5000);
    ComparisonState down_state, up_state;
    Configuration incumbent = point(1.0, -0.5);
    for (int k = 0; k < 25; ++k) {
        const Configuration challenger = point(1.0 + 0.02 * ((k % 5) - 2), 0.5);
        const Decision a =
            reactive_compare(down, challenger, incumbent, params, down_state, Direction::Minimize);
        const Decision b =
            reactive_compare(up, challenger, incumbent, params, up_state, Direction::Maximize);
        CHECK(a.winner == b.winner);
        CHECK(a.resolution == b.resolution);
        CHECK(a.samples_challenger == b.samples_challenger);
        if (a.winner == Winner::Challenger) incumbent = challenger;
    }
    CHECK(down_state.n_current == up_state.n_current);
}

TEST_CASE("fixed_compare picks strict improvements and keeps ties") {
    CrnOracle oracle(linear_gauss(), 5, 1000);
    const Decision win =
        fixed_compare(oracle, point(3.0, 0.0), point(5.0, 0.0), 1, Direction::Minimize);
    CHECK(win.winner == Winner::Challenger);
    CHECK(win.resolution == Resolution::Heuristic);
    CHECK(win.samples_challenger == 1);

    const Decision tie =
        fixed_compare(oracle, point(5.0, -0.0), point(5.0, 0.0), 4, Direction::Minimize);
    CHECK(tie.winner == Winner::Incumbent);

    CHECK_THROWS_AS(fixed_compare(oracle, point(1, 0), point(2, 0), 0, Direction::Minimize),
                    std::invalid_argument);
}

TEST_CASE("fixed_compare estimates equal the recorded 20-sample means") {
    const BenchmarkSpec spec{BenchmarkFunction::Griewank, 4, 0.1};
    CrnOracle oracle(make_objective(spec), 77, 1000);
    const Configuration challenger{{10.0, 20.0, -5.0, 1.0}};
    const Configuration incumbent{{300.0, -200.0, 50.0, 0.0}};
    const Decision d = fixed_compare(oracle, challenger, incumbent, 20, Direction::Minimize);
    CHECK(d.samples_challenger == 20);
    CHECK(d.samples_incumbent == 20);

    const auto& cha = oracle.recorded(challenger);
    const auto& inc = oracle.recorded(incumbent);
    REQUIRE(cha.size() == 20);
    REQUIRE(inc.size() == 20);
    const bool challenger_better = testref::mean(cha) < testref::mean(inc);
    CHECK((d.winner == Winner::Challenger) == challenger_better);
}

TEST_CASE("fixed_compare truncates on budget exhaustion") {
    CrnOracle oracle(linear_gauss(), 6, 5);
    const Decision d =
        fixed_compare(oracle, point(0.0, 0.5), point(1.0, -0.5), 10, Direction::Minimize);
    CHECK(d.resolution == Resolution::BudgetTruncated);
    CHECK(oracle.ledger().spent == 5);
}

TEST_CASE("ssm eliminates a clear difference quickly and correctly") {
    const SSMParams params{0.1, 0.1, 2, 1};
    CrnOracle oracle(linear_gauss(), 11, 10000);
    const Decision d =
        ssm_compare(oracle, point(0.0, 1.0), point(10.0, 1.0), params, Direction::Minimize);
    CHECK(d.winner == Winner::Challenger);
    CHECK(d.samples_challenger == d.samples_incumbent);
    CHECK(d.samples_challenger < 100);  // a few stages, not the whole budget
}

TEST_CASE("ssm region closure on identical configurations") {
    const SSMParams params{0.1, 0.5, 2, 1};
    // zero noise, equal means: the first-stage variance vanishes, the region
    // is born closed, and the tie keeps the incumbent
    CrnOracle oracle(linear_gauss(), 12, 1000);
    const Decision d =
        ssm_compare(oracle, point(5.0, 0.0), point(5.0, -0.0), params, Direction::Minimize);
    CHECK(d.resolution == Resolution::Heuristic);
    CHECK(d.winner == Winner::Incumbent);
    CHECK(d.samples_challenger == params.n0);
}

TEST_CASE("ssm closes the region after 2ca/delta stages when nothing separates") {
    // identical observation sequences for both configurations: the cumulative
    // difference stays at zero, so the comparison runs until the region
    // closes and the tie keeps the incumbent
    std::vector<double> script;
    for (int i = 0; i < 40; ++i) script.push_back(i % 2 == 0 ? 1.0 : 3.0);
    CrnOracle oracle(scripted({{0.0, script}, {1.0, script}}), 14, 1000);
    const SSMParams params{0.1, 2.0, 2, 1};
    const Decision d = ssm_compare(oracle, point(1.0, 0.0), point(0.0, 0.0), params,
                                   Direction::Minimize);
    // first-stage variance: var{1,3} = 2 per side, so S^2 = 4,
    // eta = ((2 alpha)^-2 - 1)/2 = 12, a = eta (n0-1) S^2 / delta = 24,
    // and the region a - r delta/(2c) closes at r = 2ca/delta = 24
    CHECK(d.resolution == Resolution::Heuristic);
    CHECK(d.winner == Winner::Incumbent);
    CHECK(d.samples_challenger == 24);
    CHECK(d.samples_incumbent == 24);
}

TEST_CASE("ssm decision replays from the recorded observations") {
    const SSMParams params{0.1, 0.2, 2, 1};
    for (std::uint64_t seed = 40; seed < 60; ++seed) {
        CrnOracle oracle(linear_gauss(), seed, 100000);
        const Configuration challenger = point(0.0, 1.0);
        const Configuration incumbent = point(0.3, 1.0);
        const Decision d =
            ssm_compare(oracle, challenger, incumbent, params, Direction::Minimize);

        const auto& cha = oracle.recorded(challenger);
        const auto& inc = oracle.recorded(incumbent);
        // replay the continuation region from the recorded observations
        const auto var2 = [](const std::vector<double>& v) {
            const double m = (v[0] + v[1]) / 2.0;
            return (v[0] - m) * (v[0] - m) + (v[1] - m) * (v[1] - m);
        };
        const double s2 = var2(cha) + var2(inc);
        const double eta = 0.5 * (std::pow(2.0 * params.alpha, -2.0) - 1.0);
        const double a = eta * s2 / params.delta;
        const double lambda = params.delta / 2.0;

        double diff = cha[0] - inc[0] + cha[1] - inc[1];
        int r = 2;
        Winner expected = Winner::Incumbent;
        Resolution expected_resolution = Resolution::Heuristic;
        for (;;) {
            const double width = a - lambda * r;
            if (width <= 0.0) {
                double mc = 0.0, mi = 0.0;
                for (int i = 0; i < r; ++i) {
                    mc += cha[i];
                    mi += inc[i];
                }
                expected = mc < mi ? Winner::Challenger : Winner::Incumbent;
                expected_resolution = Resolution::Heuristic;
                break;
            }
            if (std::fabs(diff) >= width) {
                expected = diff < 0.0 ? Winner::Challenger : Winner::Incumbent;
                expected_resolution = Resolution::Statistical;
                break;
            }
            diff += cha[r] - inc[r];
            ++r;
        }
        CHECK(d.winner == expected);
        CHECK(d.resolution == expected_resolution);
        CHECK(d.samples_challenger == r);
    }
}

TEST_CASE("ssm reuses recorded observations across comparisons") {
    const SSMParams params{0.1, 0.05, 2, 1};
    CrnOracle oracle(linear_gauss(), 13, 100000);
    const Configuration incumbent = point(0.0, 1.0);

    const Decision first =
        ssm_compare(oracle, point(2.0, 1.0), incumbent, params, Direction::Minimize);
    CHECK(first.winner == Winner::Incumbent);
    const std::uint64_t spent_first = oracle.ledger().spent;
    CHECK(spent_first ==
          static_cast<std::uint64_t>(first.samples_challenger + first.samples_incumbent));

    // the second challenger pays fresh, the incumbent replays its record
    const Decision second =
        ssm_compare(oracle, point(2.5, 1.0), incumbent, params, Direction::Minimize);
    const std::uint64_t spent_second = oracle.ledger().spent - spent_first;
    CHECK(spent_second <
          static_cast<std::uint64_t>(second.samples_challenger + second.samples_incumbent));
}

TEST_CASE("ssm is more conservative than the reactive scheme on noisy griewank") {
    const BenchmarkSpec spec{BenchmarkFunction::Griewank, 10, 0.1};
    const Box domain = benchmark_domain(spec.function, spec.dimension);
    const GuardParams guard{0.1, 0.4, 0.01, 2, std::nullopt};
    const SSMParams ssm{0.1, 0.01, 2, 1};

    double reactive_samples = 0.0, ssm_samples = 0.0;
    const int comparisons = 100;
    for (int k = 0; k < comparisons; ++k) {
        const std::uint64_t seed = 700 + static_cast<std::uint64_t>(k);
        SeedStream streams(seed);
        DrawSequence draws(streams, kSearchStream);
        Configuration a, b;
        for (int j = 0; j < 10; ++j) a.coords.push_back(-600.0 + 1200.0 * draws.next_uniform());
        for (int j = 0; j < 10; ++j) b.coords.push_back(-600.0 + 1200.0 * draws.next_uniform());

        CrnOracle r_oracle(make_objective(spec), seed, 400);
        ComparisonState state;
        reactive_samples +=
            reactive_compare(r_oracle, a, b, guard, state, Direction::Minimize).samples_used();

        CrnOracle s_oracle(make_objective(spec), seed, 400);
        ssm_samples += ssm_compare(s_oracle, a, b, ssm, Direction::Minimize).samples_used();
    }
    CHECK(ssm_samples / comparisons >= reactive_samples / comparisons);
}

TEST_CASE("policies never spend past the ledger") {
    // shared counting objective: fresh simulator invocations equal spent
    int invocations = 0;
    StochasticObjective counting;
    counting.mean = [](const std::vector<double>& x) { return x[0]; };
    counting.sample = [&invocations](const std::vector<double>& x, double z) {
        ++invocations;
        return x[0] + x[1] * z;
    };

    CrnOracle oracle(counting, 3141, 60);
    ComparisonState state;
    const GuardParams guard{0.1, 0.4, 0.01, 2, std::nullopt};
    reactive_compare(oracle, point(0.2, 0.5), point(0.0, -0.5), guard, state, Direction::Minimize);
    fixed_compare(oracle, point(0.4, 0.5), point(0.0, -0.5), 5, Direction::Minimize);
    ssm_compare(oracle, point(0.6, 0.5), point(0.0, -0.5), SSMParams{0.1, 0.05, 2, 1},
                Direction::Minimize);
    CHECK(static_cast<std::uint64_t>(invocations) == oracle.ledger().spent);
    CHECK(oracle.ledger().spent <= 60);
}
