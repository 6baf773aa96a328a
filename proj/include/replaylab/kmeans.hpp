#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace replaylab {

/// Centroids produced by kmeans_fit. Assignment is nearest centroid under
/// Euclidean distance, ties broken by the lowest centroid index.
struct KMeansModel {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<double> centroids; // row-major k x dim
    bool fitted = false;

    std::span<const double> centroid(std::size_t i) const {
        return {centroids.data() + i * dim, dim};
    }
};

/// k-means++ seeding followed by Lloyd iterations until the assignment
/// reaches a fixpoint or max_iters. Deterministic given the seed.
KMeansModel kmeans_fit(const std::vector<std::vector<double>>& samples, std::size_t k,
                       std::uint64_t seed, std::size_t max_iters = 100);

/// Index of the nearest centroid; ties go to the lowest index.
std::size_t kmeans_assign(const KMeansModel& model, std::span<const double> x);

/// Sum over samples of the squared distance to the nearest centroid.
double kmeans_distortion(const KMeansModel& model, const std::vector<std::vector<double>>& samples);

} // namespace replaylab
