#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "replaylab/cluster_index.hpp"
#include "replaylab/errors.hpp"
#include "replaylab/replay_buffer.hpp"
#include "replaylab/rng.hpp"
#include "replaylab/sampling.hpp"

using namespace replaylab;

namespace {

struct Fixture {
    ReplayBuffer buffer{64, 1};
    ClusterIndex index;
};

/// Buffer + index where slot i belongs to cluster codes[i].
Fixture make_fixture(const std::vector<ClusterCode>& codes) {
    Fixture f;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        Transition t;
        t.state = {static_cast<double>(i)};
        t.next_state = {static_cast<double>(i) + 0.5};
        const auto result = f.buffer.insert(std::move(t));
        f.index.insert(result.slot, codes[i]);
    }
    return f;
}

/// The {8,2} fixture: slots 0..7 in one cluster, slots 8..9 in another.
Fixture make_8_2_fixture() {
    return make_fixture({0, 0, 0, 0, 0, 0, 0, 0, 1, 1});
}

std::vector<double> empirical_frequencies(const Fixture& f, const SamplerConfig& config,
                                          std::size_t draws, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> hits(f.buffer.len(), 0);
    const BatchRequest one{1};
    for (std::size_t d = 0; d < draws; ++d) {
        ++hits[sample_batch(one, config, f.buffer, f.index, rng).front().index];
    }
    std::vector<double> freq(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        freq[i] = static_cast<double>(hits[i]) / static_cast<double>(draws);
    }
    return freq;
}

} // namespace

TEST_CASE("strategy names round-trip") {
    for (const Strategy s :
         {Strategy::Uniform, Strategy::EqualCluster, Strategy::DistributionAware}) {
        CHECK(parse_strategy(strategy_name(s)) == s);
    }
    CHECK(std::string(strategy_name(Strategy::Uniform)) == "uniform");
    CHECK(std::string(strategy_name(Strategy::EqualCluster)) == "equal_cluster");
    CHECK(std::string(strategy_name(Strategy::DistributionAware)) == "distribution_aware");
    CHECK_FALSE(parse_strategy("prioritized").has_value());
    CHECK_FALSE(parse_strategy("").has_value());
}

TEST_CASE("sampler config validation and effective beta") {
    CHECK_NOTHROW(validate(SamplerConfig{Strategy::DistributionAware, 0.0}));
    CHECK_NOTHROW(validate(SamplerConfig{Strategy::DistributionAware, 1.0}));
    CHECK_THROWS_AS(validate(SamplerConfig{Strategy::DistributionAware, -0.01}), ConfigError);
    CHECK_THROWS_AS(validate(SamplerConfig{Strategy::DistributionAware, 1.01}), ConfigError);

    CHECK(effective_beta(SamplerConfig{Strategy::Uniform, 0.3}) == 1.0);
    CHECK(effective_beta(SamplerConfig{Strategy::EqualCluster, 0.3}) == 0.0);
    CHECK(effective_beta(SamplerConfig{Strategy::DistributionAware, 0.3}) == 0.3);
}

TEST_CASE("per-slot probabilities on the {8,2} fixture") {
    // n = 10, k = 2; members of the 8-cluster and the 2-cluster at
    // beta = 0.5 get 0.5/10 + 0.5/16 and 0.5/10 + 0.5/4.
    const SamplerConfig half{Strategy::DistributionAware, 0.5};
    CHECK(probability_of(half, 10, 8, 2) == doctest::Approx(0.08125).epsilon(1e-15));
    CHECK(probability_of(half, 10, 2, 2) == doctest::Approx(0.175).epsilon(1e-15));

    const SamplerConfig equal{Strategy::EqualCluster, 0.5};
    CHECK(probability_of(equal, 10, 8, 2) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(probability_of(equal, 10, 2, 2) == doctest::Approx(0.25).epsilon(1e-15));

    const SamplerConfig uniform{Strategy::Uniform, 0.5};
    CHECK(probability_of(uniform, 10, 8, 2) == 0.1);
    CHECK(probability_of(uniform, 10, 2, 2) == 0.1);

    // Sanity: 8 big-cluster slots plus 2 small-cluster slots sum to one.
    CHECK(8 * 0.08125 + 2 * 0.175 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("probabilities sum to one over randomized buffer shapes") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(50);
        std::vector<ClusterCode> codes(n);
        std::map<ClusterCode, std::size_t> counts;
        for (auto& c : codes) {
            c = rng.below(8);
            ++counts[c];
        }
        const std::size_t k = counts.size();
        const double beta = rng.uniform();

        for (const Strategy strategy :
             {Strategy::Uniform, Strategy::EqualCluster, Strategy::DistributionAware}) {
            const SamplerConfig config{strategy, beta};
            double sum = 0.0;
            for (const auto c : codes) {
                sum += probability_of(config, n, counts.at(c), k);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("beta endpoints reproduce the pure strategies slot for slot") {
    Rng rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(50);
        std::map<ClusterCode, std::size_t> counts;
        std::vector<ClusterCode> codes(n);
        for (auto& c : codes) {
            c = rng.below(6);
            ++counts[c];
        }
        const std::size_t k = counts.size();
        for (const auto c : codes) {
            const std::size_t num_i = counts.at(c);
            const double da1 = probability_of({Strategy::DistributionAware, 1.0}, n, num_i, k);
            const double da0 = probability_of({Strategy::DistributionAware, 0.0}, n, num_i, k);
            const double uni = probability_of({Strategy::Uniform, 0.5}, n, num_i, k);
            const double eq = probability_of({Strategy::EqualCluster, 0.5}, n, num_i, k);
            CHECK(std::abs(da1 - uni) <= 1e-15);
            CHECK(std::abs(da0 - eq) <= 1e-15);
        }
    }
}

TEST_CASE("probability decreases with cluster size when beta < 1") {
    const SamplerConfig config{Strategy::DistributionAware, 0.4};
    double previous = 1.0;
    for (std::size_t num_i = 1; num_i <= 20; ++num_i) {
        const double p = probability_of(config, 40, num_i, 5);
        CHECK(p < previous);
        previous = p;
    }
    // Uniform is flat in the cluster size.
    CHECK(probability_of({Strategy::Uniform, 0.0}, 40, 1, 5) ==
          probability_of({Strategy::Uniform, 0.0}, 40, 20, 5));
}

TEST_CASE("slot-level probability lookups check buffer and index") {
    auto f = make_8_2_fixture();
    const SamplerConfig config{Strategy::DistributionAware, 0.5};

    CHECK(probability_of(SlotId{0}, config, f.buffer, f.index) ==
          doctest::Approx(0.08125).epsilon(1e-15));
    CHECK(probability_of(SlotId{9}, config, f.buffer, f.index) ==
          doctest::Approx(0.175).epsilon(1e-15));

    // Unoccupied slot: the buffer holds 10 transitions.
    CHECK_THROWS_AS(probability_of(SlotId{10}, config, f.buffer, f.index), InvalidSlot);

    // Occupied but missing from the index: corruption, for every strategy.
    f.index.remove(SlotId{0}, 0);
    CHECK_THROWS_AS(probability_of(SlotId{0}, config, f.buffer, f.index), IndexCorruption);
    CHECK_THROWS_AS(probability_of(SlotId{0}, {Strategy::Uniform, 0.5}, f.buffer, f.index),
                    IndexCorruption);
}

TEST_CASE("sample_batch guards its preconditions") {
    Fixture empty;
    Rng rng(1);
    CHECK_THROWS_AS(sample_batch({4}, {Strategy::Uniform, 1.0}, empty.buffer, empty.index, rng),
                    NotReady);

    // Occupied buffer but an empty index: cluster-stage draws are impossible.
    Fixture f = make_fixture({0, 0, 1});
    f.index.clear();
    CHECK_THROWS_AS(sample_batch({4}, {Strategy::EqualCluster, 0.0}, f.buffer, f.index, rng),
                    IndexCorruption);
    CHECK_THROWS_AS(sample_batch({4}, {Strategy::DistributionAware, 0.5}, f.buffer, f.index, rng),
                    IndexCorruption);

    auto healthy = make_8_2_fixture();
    const auto batch =
        sample_batch({32}, {Strategy::DistributionAware, 0.5}, healthy.buffer, healthy.index, rng);
    CHECK(batch.size() == 32);
    for (const SlotId slot : batch) {
        CHECK(slot.index < healthy.buffer.len());
    }
}

TEST_CASE("the beta endpoints consume the random stream identically") {
    auto f = make_8_2_fixture();
    const BatchRequest request{2000};

    Rng a(777);
    Rng b(777);
    CHECK(sample_batch(request, {Strategy::Uniform, 0.5}, f.buffer, f.index, a) ==
          sample_batch(request, {Strategy::DistributionAware, 1.0}, f.buffer, f.index, b));

    Rng c(778);
    Rng d(778);
    CHECK(sample_batch(request, {Strategy::EqualCluster, 0.5}, f.buffer, f.index, c) ==
          sample_batch(request, {Strategy::DistributionAware, 0.0}, f.buffer, f.index, d));
}

TEST_CASE("empirical frequencies match the analytic distribution on the {8,2} fixture") {
    auto f = make_8_2_fixture();
    const std::size_t draws = 200000;

    for (const double beta : {0.0, 0.5, 1.0}) {
        const SamplerConfig config{Strategy::DistributionAware, beta};
        const auto freq = empirical_frequencies(f, config, draws, 5000 + std::lround(beta * 10));
        for (std::size_t i = 0; i < freq.size(); ++i) {
            const double p = probability_of(SlotId{i}, config, f.buffer, f.index);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
            CHECK(std::abs(freq[i] - p) <= 4.0 * se);
        }
    }
}

TEST_CASE("audit passes on a healthy buffer and reports per-slot rows") {
    auto f = make_8_2_fixture();
    Rng rng(31);
    const AuditReport report =
        audit_distribution(100000, {Strategy::DistributionAware, 0.5}, f.buffer, f.index, rng);

    CHECK(report.passed);
    CHECK(report.draws == 100000);
    CHECK(report.rows.size() == f.buffer.len());
    CHECK(std::abs(report.analytic_sum - 1.0) <= 1e-12);
    double empirical_sum = 0.0;
    for (const auto& row : report.rows) {
        CHECK(row.deviation == std::abs(row.empirical - row.analytic));
        CHECK(row.deviation <= row.bound);
        empirical_sum += row.empirical;
    }
    CHECK(empirical_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("audit bound shrinks like one over the square root of the draws") {
    auto f = make_8_2_fixture();
    const SamplerConfig config{Strategy::DistributionAware, 0.5};

    Rng r1(33);
    Rng r2(34);
    const auto small = audit_distribution(10000, config, f.buffer, f.index, r1);
    const auto large = audit_distribution(40000, config, f.buffer, f.index, r2);

    // bound = z * sqrt(p (1-p) / draws) + 1/draws; stripping the floor,
    // quadrupling the draws must exactly halve the statistical part.
    const double stat_small = small.rows[0].bound - 1.0 / 10000.0;
    const double stat_large = large.rows[0].bound - 1.0 / 40000.0;
    CHECK(stat_small == doctest::Approx(2.0 * stat_large).epsilon(1e-12));
}

TEST_CASE("audit detects a desynchronized index") {
    auto f = make_8_2_fixture();
    f.index.remove(SlotId{4}, 0); // legal removal, never reinserted
    Rng rng(35);
    CHECK_THROWS_AS(
        audit_distribution(1000, {Strategy::Uniform, 1.0}, f.buffer, f.index, rng),
        IndexCorruption);
}
