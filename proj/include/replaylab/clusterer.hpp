#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "replaylab/cluster_index.hpp"
#include "replaylab/featurizer.hpp"
#include "replaylab/kmeans.hpp"
#include "replaylab/simhash.hpp"

namespace replaylab {

/// Assigns stored states to cluster codes.
///
/// observe() is called once per stored transition in arrival order. A
/// clusterer that needs a warmup fit (k-means) returns a provisional code
/// until enough states arrived, then fits and raises the rebuild flag; the
/// caller must reassign every buffered state via assign() before using the
/// index again. take_rebuild_flag() reports this exactly once.
class Clusterer {
public:
    virtual ~Clusterer() = default;

    virtual ClusterCode observe(std::span<const double> state) = 0;
    virtual ClusterCode assign(std::span<const double> state) const = 0;
    /// True once codes are final (fit done, or never needed).
    virtual bool ready() const = 0;
    virtual bool take_rebuild_flag() = 0;
    /// Upper bound on the number of distinct codes.
    virtual std::size_t cluster_budget() const = 0;
};

/// SimHash codes over (featurized) observations. Stationary from the first
/// state on; code width is ceil(log2(k_target)).
class SimHashClusterer : public Clusterer {
public:
    SimHashClusterer(std::size_t input_dim, std::size_t k_target, std::uint64_t seed);

    ClusterCode observe(std::span<const double> state) override { return assign(state); }
    ClusterCode assign(std::span<const double> state) const override;
    bool ready() const override { return true; }
    bool take_rebuild_flag() override { return false; }
    std::size_t cluster_budget() const override;

private:
    StateFeaturizer featurizer_;
    SimHash hash_;
};

/// k-means codes over (featurized) observations. Collects the first
/// warmup_size states, fits once, then assigns only; before the fit every
/// state gets provisional code 0 (a single cluster, under which the
/// interpolated sampling degenerates to uniform).
class KMeansClusterer : public Clusterer {
public:
    KMeansClusterer(std::size_t input_dim, std::size_t k, std::size_t warmup_size, std::uint64_t seed);

    ClusterCode observe(std::span<const double> state) override;
    ClusterCode assign(std::span<const double> state) const override;
    bool ready() const override { return model_.fitted; }
    bool take_rebuild_flag() override;
    std::size_t cluster_budget() const override { return k_; }

    const KMeansModel& model() const { return model_; }

private:
    StateFeaturizer featurizer_;
    std::size_t k_;
    std::size_t warmup_size_;
    std::uint64_t seed_;
    std::vector<std::vector<double>> warmup_;
    KMeansModel model_;
    bool rebuild_flag_ = false;
};

} // namespace replaylab
