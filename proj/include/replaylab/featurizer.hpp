#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace replaylab {

/// Maps raw observations to the vectors fed to the clusterer.
///
/// Observations of dimension <= max_dim pass through unchanged; larger ones
/// go through a fixed seeded Gaussian projection down to max_dim. The
/// projection is drawn once at construction, so cluster codes stay
/// stationary across a run.
class StateFeaturizer {
public:
    static constexpr std::size_t kDefaultMaxDim = 64;

    StateFeaturizer(std::size_t input_dim, std::uint64_t seed, std::size_t max_dim = kDefaultMaxDim);

    std::vector<double> apply(std::span<const double> state) const;

    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const { return output_dim_; }
    bool is_identity() const { return projection_.empty(); }

private:
    std::size_t input_dim_;
    std::size_t output_dim_;
    std::vector<double> projection_; // row-major output_dim x input_dim; empty when identity
};

} // namespace replaylab
