#include "replaylab/clusterer.hpp"

#include "replaylab/errors.hpp"
#include "replaylab/rng.hpp"

namespace replaylab {

SimHashClusterer::SimHashClusterer(std::size_t input_dim, std::size_t k_target, std::uint64_t seed)
    : featurizer_(input_dim, seed),
      hash_(SimHashParams{code_bits_for(k_target), featurizer_.output_dim(), seed}) {
    if (k_target < 2) {
        throw ConfigError("simhash cluster budget must be at least 2");
    }
}

ClusterCode SimHashClusterer::assign(std::span<const double> state) const {
    return hash_.code(featurizer_.apply(state));
}

std::size_t SimHashClusterer::cluster_budget() const {
    return std::size_t{1} << hash_.code_bits();
}

KMeansClusterer::KMeansClusterer(std::size_t input_dim, std::size_t k, std::size_t warmup_size,
                                 std::uint64_t seed)
    : featurizer_(input_dim, seed), k_(k), warmup_size_(warmup_size), seed_(seed) {
    if (k == 0) {
        throw ConfigError("kmeans cluster count must be positive");
    }
    if (warmup_size < k) {
        throw ConfigError("kmeans warmup_size must be at least k");
    }
    warmup_.reserve(warmup_size);
}

ClusterCode KMeansClusterer::observe(std::span<const double> state) {
    if (model_.fitted) {
        return assign(state);
    }
    warmup_.push_back(featurizer_.apply(state));
    if (warmup_.size() == warmup_size_) {
        model_ = kmeans_fit(warmup_, k_, seed_);
        warmup_.clear();
        warmup_.shrink_to_fit();
        rebuild_flag_ = true;
        return assign(state);
    }
    return 0;
}

ClusterCode KMeansClusterer::assign(std::span<const double> state) const {
    if (!model_.fitted) {
        return 0;
    }
    return kmeans_assign(model_, featurizer_.apply(state));
}

bool KMeansClusterer::take_rebuild_flag() {
    const bool flag = rebuild_flag_;
    rebuild_flag_ = false;
    return flag;
}

} // namespace replaylab
