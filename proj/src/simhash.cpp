#include "replaylab/simhash.hpp"

#include <cmath>

#include "replaylab/errors.hpp"
#include "replaylab/rng.hpp"

namespace replaylab {

std::size_t code_bits_for(std::size_t k_target) {
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < k_target && bits < 64) {
        ++bits;
    }
    return bits;
}

SimHash::SimHash(const SimHashParams& params) : params_(params) {
    if (params_.code_bits == 0 || params_.code_bits > 64) {
        throw ConfigError("simhash code_bits must be in [1, 64]");
    }
    if (params_.input_dim == 0) {
        throw ConfigError("simhash input_dim must be positive");
    }
    projection_.resize(params_.code_bits * params_.input_dim);
    Rng rng(mix_seed(params_.seed, 0x53696d48617368ull));
    for (double& w : projection_) {
        w = rng.normal();
    }
}

HashCode SimHash::code(std::span<const double> x) const {
    if (x.size() != params_.input_dim) {
        throw RejectedInput("simhash input dimension mismatch");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw RejectedInput("simhash input has non-finite component");
        }
    }
    HashCode bits = 0;
    for (std::size_t row = 0; row < params_.code_bits; ++row) {
        double dot = 0.0;
        const double* w = projection_.data() + row * params_.input_dim;
        for (std::size_t col = 0; col < params_.input_dim; ++col) {
            dot += w[col] * x[col];
        }
        if (dot >= 0.0) { // exact zero hashes to bit 1
            bits |= HashCode{1} << row;
        }
    }
    return bits;
}

} // namespace replaylab
