#include "replaylab/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "replaylab/errors.hpp"
#include "replaylab/rng.hpp"

namespace replaylab {

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// k-means++: first centroid uniform, then weighted by squared distance to
// the nearest chosen centroid. A zero total weight (fewer distinct points
// than k) falls back to the first not-yet-chosen index.
std::vector<std::size_t> seed_centroids(const std::vector<std::vector<double>>& samples,
                                        std::size_t k, Rng& rng) {
    const std::size_t n = samples.size();
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    chosen.push_back(rng.below(n));

    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
    std::vector<bool> taken(n, false);
    taken[chosen[0]] = true;

    while (chosen.size() < k) {
        const auto& last = samples[chosen.back()];
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            min_sq[i] = std::min(min_sq[i], sq_distance(samples[i], last));
            total += min_sq[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                r -= min_sq[i];
                if (r <= 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) { // accumulated rounding; take the last positive-weight point
                for (std::size_t i = n; i-- > 0;) {
                    if (min_sq[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick == n) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i]) {
                    pick = i;
                    break;
                }
            }
        }
        taken[pick] = true;
        chosen.push_back(pick);
    }
    return chosen;
}

} // namespace

KMeansModel kmeans_fit(const std::vector<std::vector<double>>& samples, std::size_t k,
                       std::uint64_t seed, std::size_t max_iters) {
    if (k == 0) {
        throw ConfigError("kmeans k must be positive");
    }
    if (samples.size() < k) {
        throw ConfigError("kmeans needs at least k samples, got " + std::to_string(samples.size()) +
                          " for k=" + std::to_string(k));
    }
    const std::size_t dim = samples.front().size();
    for (const auto& s : samples) {
        if (s.size() != dim) {
            throw RejectedInput("kmeans samples have mixed dimensions");
        }
        for (double v : s) {
            if (!std::isfinite(v)) {
                throw RejectedInput("kmeans sample has non-finite component");
            }
        }
    }

    KMeansModel model;
    model.k = k;
    model.dim = dim;
    model.centroids.resize(k * dim);
    model.fitted = true;

    Rng rng(mix_seed(seed, 0x6b4d65616e73ull));
    const auto seeds = seed_centroids(samples, k, rng);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& s = samples[seeds[c]];
        std::copy(s.begin(), s.end(), model.centroids.begin() + c * dim);
    }

    std::vector<std::size_t> assignment(samples.size(), k);
    std::vector<double> sums(k * dim);
    std::vector<std::size_t> sizes(k);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const std::size_t a = kmeans_assign(model, samples[i]);
            if (a != assignment[i]) {
                assignment[i] = a;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), std::size_t{0});
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const std::size_t a = assignment[i];
            ++sizes[a];
            for (std::size_t dcol = 0; dcol < dim; ++dcol) {
                sums[a * dim + dcol] += samples[i][dcol];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) {
                continue; // empty cluster keeps its centroid
            }
            for (std::size_t dcol = 0; dcol < dim; ++dcol) {
                model.centroids[c * dim + dcol] = sums[c * dim + dcol] / static_cast<double>(sizes[c]);
            }
        }
    }
    return model;
}

std::size_t kmeans_assign(const KMeansModel& model, std::span<const double> x) {
    if (!model.fitted) {
        throw NotReady("kmeans model is not fitted");
    }
    if (x.size() != model.dim) {
        throw RejectedInput("kmeans query dimension mismatch");
    }
    std::size_t best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.k; ++c) {
        const double sq = sq_distance(x, model.centroid(c));
        if (sq < best_sq) { // strict: ties keep the lowest index
            best_sq = sq;
            best = c;
        }
    }
    return best;
}

double kmeans_distortion(const KMeansModel& model, const std::vector<std::vector<double>>& samples) {
    double total = 0.0;
    for (const auto& s : samples) {
        total += sq_distance(s, model.centroid(kmeans_assign(model, s)));
    }
    return total;
}

} // namespace replaylab
