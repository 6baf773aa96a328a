#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "replaylab/cluster_index.hpp"
#include "replaylab/replay_buffer.hpp"
#include "replaylab/rng.hpp"
#include "replaylab/transition.hpp"

namespace replaylab {

enum class Strategy {
    Uniform,
    EqualCluster,
    DistributionAware,
};

const char* strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

/// Strategy selector and the interpolation weight beta used by
/// DistributionAware:
///
///   p_i = beta / n + (1 - beta) / (k * num_i)
///
/// where n is the buffer length, num_i the size of transition i's cluster
/// and k the number of nonempty clusters. beta = 1 reproduces Uniform and
/// beta = 0 reproduces EqualCluster, slot for slot.
struct SamplerConfig {
    Strategy strategy = Strategy::Uniform;
    double beta = 0.5;
};

/// Throws ConfigError unless beta is in [0, 1].
void validate(const SamplerConfig& config);

/// Weight actually used by the two-stage draw: 1 for Uniform, 0 for
/// EqualCluster, beta for DistributionAware.
double effective_beta(const SamplerConfig& config);

/// Per-transition sampling probability from the raw quantities.
/// k must count nonempty clusters only; with empty clusters included the
/// probabilities would not sum to one.
double probability_of(const SamplerConfig& config, std::size_t n, std::size_t num_i, std::size_t k);

/// probability_of with n, num_i and k pulled from a live buffer and index.
double probability_of(SlotId slot, const SamplerConfig& config, const ReplayBuffer& buffer,
                      const ClusterIndex& index);

struct BatchRequest {
    std::size_t batch_size = 1;
};

/// Draws batch_size slots i.i.d. with replacement. Each draw: with
/// probability beta a uniform slot among all n, otherwise a uniform
/// nonempty cluster followed by a uniform member of it. The marginal of
/// this mixture equals probability_of exactly.
std::vector<SlotId> sample_batch(const BatchRequest& request, const SamplerConfig& config,
                                 const ReplayBuffer& buffer, const ClusterIndex& index, Rng& rng);

struct AuditRow {
    SlotId slot;
    double analytic = 0.0;
    double empirical = 0.0;
    double deviation = 0.0; // |empirical - analytic|
    double bound = 0.0;     // z * binomial standard error (plus a 1/draws floor)
};

struct AuditReport {
    std::vector<AuditRow> rows; // one per occupied slot
    std::size_t draws = 0;
    double analytic_sum = 0.0;
    double max_deviation = 0.0;
    bool passed = false; // all rows within bound and analytic_sum ~ 1
};

/// Draws `draws` single samples and compares empirical per-slot frequencies
/// against the analytic probabilities. z scales the per-slot binomial bound.
AuditReport audit_distribution(std::size_t draws, const SamplerConfig& config,
                               const ReplayBuffer& buffer, const ClusterIndex& index, Rng& rng,
                               double z = 5.0);

} // namespace replaylab
