#include "replaylab/featurizer.hpp"

#include <cmath>

#include "replaylab/errors.hpp"
#include "replaylab/rng.hpp"

namespace replaylab {

StateFeaturizer::StateFeaturizer(std::size_t input_dim, std::uint64_t seed, std::size_t max_dim)
    : input_dim_(input_dim), output_dim_(input_dim) {
    if (input_dim == 0 || max_dim == 0) {
        throw ConfigError("featurizer dimensions must be positive");
    }
    if (input_dim > max_dim) {
        output_dim_ = max_dim;
        projection_.resize(output_dim_ * input_dim_);
        Rng rng(mix_seed(seed, 0x4665617455524553ull));
        for (double& w : projection_) {
            w = rng.normal();
        }
    }
}

std::vector<double> StateFeaturizer::apply(std::span<const double> state) const {
    if (state.size() != input_dim_) {
        throw RejectedInput("featurizer input dimension mismatch");
    }
    for (double x : state) {
        if (!std::isfinite(x)) {
            throw RejectedInput("featurizer input has non-finite component");
        }
    }
    if (is_identity()) {
        return {state.begin(), state.end()};
    }
    std::vector<double> out(output_dim_, 0.0);
    for (std::size_t row = 0; row < output_dim_; ++row) {
        double acc = 0.0;
        const double* w = projection_.data() + row * input_dim_;
        for (std::size_t col = 0; col < input_dim_; ++col) {
            acc += w[col] * state[col];
        }
        out[row] = acc;
    }
    return out;
}

} // namespace replaylab
