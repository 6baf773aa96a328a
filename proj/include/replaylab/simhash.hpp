#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace replaylab {

using HashCode = std::uint64_t;

/// Sign-random-projection hash parameters. The projection matrix has
/// code_bits x input_dim i.i.d. standard normal entries drawn once from the
/// seed; regenerating it would invalidate every stored code.
struct SimHashParams {
    std::size_t code_bits = 7;
    std::size_t input_dim = 0;
    std::uint64_t seed = 0;
};

/// Smallest b with 2^b >= k_target (at least 1).
std::size_t code_bits_for(std::size_t k_target);

/// Locality-sensitive hash: nearby vectors collide, the probability that a
/// single bit agrees between two vectors is 1 - angle/pi.
class SimHash {
public:
    explicit SimHash(const SimHashParams& params);

    /// Bit i of the code is 1 iff row i of the projection dotted with x >= 0.
    HashCode code(std::span<const double> x) const;

    std::size_t code_bits() const { return params_.code_bits; }
    std::size_t input_dim() const { return params_.input_dim; }

private:
    SimHashParams params_;
    std::vector<double> projection_; // row-major code_bits x input_dim
};

} // namespace replaylab
