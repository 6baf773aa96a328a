#include "replaylab/sampling.hpp"

#include <cmath>
#include <string>

#include "replaylab/errors.hpp"

namespace replaylab {

const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::Uniform:
        return "uniform";
    case Strategy::EqualCluster:
        return "equal_cluster";
    case Strategy::DistributionAware:
        return "distribution_aware";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    if (name == "uniform") {
        return Strategy::Uniform;
    }
    if (name == "equal_cluster") {
        return Strategy::EqualCluster;
    }
    if (name == "distribution_aware") {
        return Strategy::DistributionAware;
    }
    return std::nullopt;
}

void validate(const SamplerConfig& config) {
    if (!(config.beta >= 0.0 && config.beta <= 1.0)) {
        throw ConfigError("sampler beta must be in [0, 1], got " + std::to_string(config.beta));
    }
}

double effective_beta(const SamplerConfig& config) {
    switch (config.strategy) {
    case Strategy::Uniform:
        return 1.0;
    case Strategy::EqualCluster:
        return 0.0;
    case Strategy::DistributionAware:
        return config.beta;
    }
    return 1.0;
}

double probability_of(const SamplerConfig& config, std::size_t n, std::size_t num_i, std::size_t k) {
    validate(config);
    if (n == 0) {
        throw NotReady("buffer is empty");
    }
    if (config.strategy == Strategy::Uniform) {
        return 1.0 / static_cast<double>(n);
    }
    if (num_i == 0 || k == 0) {
        throw IndexCorruption("cluster terms require num_i >= 1 and k >= 1");
    }
    const double beta = effective_beta(config);
    return beta / static_cast<double>(n) +
           (1.0 - beta) / (static_cast<double>(k) * static_cast<double>(num_i));
}

double probability_of(SlotId slot, const SamplerConfig& config, const ReplayBuffer& buffer,
                      const ClusterIndex& index) {
    if (slot.index >= buffer.len()) {
        throw InvalidSlot("slot " + std::to_string(slot.index) + " is not occupied");
    }
    if (!index.contains(slot)) {
        throw IndexCorruption("slot " + std::to_string(slot.index) + " is stored but not indexed");
    }
    if (config.strategy == Strategy::Uniform) {
        return probability_of(config, buffer.len(), 1, 1);
    }
    const std::size_t num_i = index.count(index.cluster_of(slot));
    return probability_of(config, buffer.len(), num_i, index.nonempty_count());
}

std::vector<SlotId> sample_batch(const BatchRequest& request, const SamplerConfig& config,
                                 const ReplayBuffer& buffer, const ClusterIndex& index, Rng& rng) {
    validate(config);
    if (request.batch_size == 0) {
        throw ConfigError("batch_size must be positive");
    }
    const std::size_t n = buffer.len();
    if (n == 0) {
        throw NotReady("cannot sample from an empty buffer");
    }
    const double beta = effective_beta(config);
    if (beta < 1.0 && index.nonempty_count() == 0) {
        throw IndexCorruption("buffer has transitions but the cluster index is empty");
    }

    std::vector<SlotId> batch;
    batch.reserve(request.batch_size);
    for (std::size_t j = 0; j < request.batch_size; ++j) {
        // Occupied slots are exactly [0, n): the buffer fills in slot order.
        if (rng.uniform() < beta) {
            batch.push_back(SlotId{rng.below(n)});
        } else {
            const ClusterCode code = index.nonempty_code_at(rng.below(index.nonempty_count()));
            const auto& list = index.members(code);
            batch.push_back(list[rng.below(list.size())]);
        }
    }
    return batch;
}

AuditReport audit_distribution(std::size_t draws, const SamplerConfig& config,
                               const ReplayBuffer& buffer, const ClusterIndex& index, Rng& rng,
                               double z) {
    if (draws == 0) {
        throw ConfigError("audit draws must be positive");
    }
    const std::size_t n = buffer.len();
    if (n == 0) {
        throw NotReady("cannot audit an empty buffer");
    }
    if (index.total() != n) {
        throw IndexCorruption("cluster counts sum to " + std::to_string(index.total()) +
                              " but the buffer holds " + std::to_string(n));
    }

    AuditReport report;
    report.draws = draws;
    report.rows.resize(n);

    // Analytic side first: this also fails fast on unindexed slots.
    for (std::size_t i = 0; i < n; ++i) {
        report.rows[i].slot = SlotId{i};
        report.rows[i].analytic = probability_of(SlotId{i}, config, buffer, index);
        report.analytic_sum += report.rows[i].analytic;
    }

    std::vector<std::size_t> hits(n, 0);
    const BatchRequest one{1};
    for (std::size_t d = 0; d < draws; ++d) {
        const SlotId slot = sample_batch(one, config, buffer, index, rng)[0];
        if (slot.index >= n) {
            throw IndexCorruption("sampler returned slot " + std::to_string(slot.index) +
                                  " outside the occupied range");
        }
        ++hits[slot.index];
    }

    const double nd = static_cast<double>(draws);
    bool all_within = true;
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = report.rows[i];
        row.empirical = static_cast<double>(hits[i]) / nd;
        row.deviation = std::abs(row.empirical - row.analytic);
        const double se = std::sqrt(row.analytic * (1.0 - row.analytic) / nd);
        row.bound = z * se + 1.0 / nd;
        report.max_deviation = std::max(report.max_deviation, row.deviation);
        if (row.deviation > row.bound) {
            all_within = false;
        }
    }
    report.passed = all_within && std::abs(report.analytic_sum - 1.0) < 1e-9;
    return report;
}

} // namespace replaylab
