#include "replaylab/q_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "replaylab/errors.hpp"

namespace replaylab {

Discretizer::Discretizer(std::vector<std::vector<double>> edges) : edges_(std::move(edges)) {
    if (edges_.empty()) {
        throw ConfigError("discretizer needs at least one dimension");
    }
    for (const auto& e : edges_) {
        if (!std::is_sorted(e.begin(), e.end())) {
            throw ConfigError("discretizer edges must be sorted");
        }
        total_bins_ *= e.size() + 1;
    }
}

Discretizer Discretizer::uniform(const std::vector<std::pair<double, double>>& bounds,
                                 const std::vector<std::size_t>& bins) {
    if (bounds.size() != bins.size()) {
        throw ConfigError("bounds/bins dimension mismatch");
    }
    std::vector<std::vector<double>> edges(bounds.size());
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        const auto [lo, hi] = bounds[d];
        if (bins[d] == 0 || !(lo < hi)) {
            throw ConfigError("discretizer needs positive bins and lo < hi");
        }
        edges[d].reserve(bins[d] - 1);
        const double width = (hi - lo) / static_cast<double>(bins[d]);
        for (std::size_t b = 1; b < bins[d]; ++b) {
            edges[d].push_back(lo + width * static_cast<double>(b));
        }
    }
    return Discretizer(std::move(edges));
}

std::size_t Discretizer::bin(std::size_t dim, double x) const {
    const auto& e = edges_[dim];
    return static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), x) - e.begin());
}

std::size_t Discretizer::flat_index(std::span<const double> state) const {
    if (state.size() != edges_.size()) {
        throw RejectedInput("discretizer state dimension mismatch");
    }
    std::size_t index = 0;
    for (std::size_t d = 0; d < edges_.size(); ++d) {
        index = index * (edges_[d].size() + 1) + bin(d, state[d]);
    }
    return index;
}

double QFunction::max_value(std::span<const double> state) const {
    double best = value(state, 0);
    for (int a = 1; a < action_count(); ++a) {
        best = std::max(best, value(state, a));
    }
    return best;
}

int QFunction::greedy_action(std::span<const double> state) const {
    int best = 0;
    double best_value = value(state, 0);
    for (int a = 1; a < action_count(); ++a) {
        const double v = value(state, a);
        if (v > best_value) { // strict: ties keep the lowest action
            best_value = v;
            best = a;
        }
    }
    return best;
}

TabularQ::TabularQ(Discretizer discretizer, int action_count)
    : discretizer_(std::move(discretizer)), action_count_(action_count) {
    if (action_count < 1) {
        throw ConfigError("action_count must be positive");
    }
    table_.assign(discretizer_.total_bins() * static_cast<std::size_t>(action_count), 0.0);
}

double TabularQ::value(std::span<const double> state, int action) const {
    return table_[discretizer_.flat_index(state) * action_count_ + action];
}

void TabularQ::update(std::span<const double> state, int action, double target, double alpha) {
    if (!std::isfinite(target)) {
        throw NumericFault("TD target is not finite");
    }
    double& q = table_[discretizer_.flat_index(state) * action_count_ + action];
    q += alpha * (target - q);
    if (!std::isfinite(q)) {
        throw NumericFault("Q value became non-finite");
    }
}

std::unique_ptr<QFunction> TabularQ::clone() const {
    return std::make_unique<TabularQ>(*this);
}

void TabularQ::copy_from(const QFunction& other) {
    const auto* o = dynamic_cast<const TabularQ*>(&other);
    if (o == nullptr || o->table_.size() != table_.size()) {
        throw std::logic_error("copy_from requires a TabularQ of identical shape");
    }
    table_ = o->table_;
}

double TabularQ::max_param_diff(const QFunction& other) const {
    const auto* o = dynamic_cast<const TabularQ*>(&other);
    if (o == nullptr || o->table_.size() != table_.size()) {
        throw std::logic_error("max_param_diff requires a TabularQ of identical shape");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        diff = std::max(diff, std::abs(table_[i] - o->table_[i]));
    }
    return diff;
}

LinearQ::LinearQ(int action_count, std::size_t feature_dim, FeatureFn features)
    : action_count_(action_count), feature_dim_(feature_dim), features_(std::move(features)) {
    if (action_count < 1 || feature_dim == 0) {
        throw ConfigError("linear Q needs positive action_count and feature_dim");
    }
    weights_.assign(static_cast<std::size_t>(action_count) * feature_dim, 0.0);
}

LinearQ LinearQ::one_hot(Discretizer discretizer, int action_count) {
    const std::size_t dim = discretizer.total_bins();
    auto disc = std::make_shared<Discretizer>(std::move(discretizer));
    return LinearQ(action_count, dim, [disc, dim](std::span<const double> state) {
        std::vector<double> phi(dim, 0.0);
        phi[disc->flat_index(state)] = 1.0;
        return phi;
    });
}

double LinearQ::value(std::span<const double> state, int action) const {
    const auto phi = features_(state);
    if (phi.size() != feature_dim_) {
        throw RejectedInput("feature map returned wrong dimension");
    }
    const double* w = weights_.data() + static_cast<std::size_t>(action) * feature_dim_;
    double acc = 0.0;
    for (std::size_t i = 0; i < feature_dim_; ++i) {
        acc += w[i] * phi[i];
    }
    return acc;
}

void LinearQ::update(std::span<const double> state, int action, double target, double alpha) {
    if (!std::isfinite(target)) {
        throw NumericFault("TD target is not finite");
    }
    const auto phi = features_(state);
    if (phi.size() != feature_dim_) {
        throw RejectedInput("feature map returned wrong dimension");
    }
    double* w = weights_.data() + static_cast<std::size_t>(action) * feature_dim_;
    double prediction = 0.0;
    for (std::size_t i = 0; i < feature_dim_; ++i) {
        prediction += w[i] * phi[i];
    }
    const double error = target - prediction;
    if (!std::isfinite(error)) {
        throw NumericFault("TD error became non-finite");
    }
    for (std::size_t i = 0; i < feature_dim_; ++i) {
        w[i] += alpha * error * phi[i];
    }
}

std::unique_ptr<QFunction> LinearQ::clone() const {
    return std::make_unique<LinearQ>(*this);
}

void LinearQ::copy_from(const QFunction& other) {
    const auto* o = dynamic_cast<const LinearQ*>(&other);
    if (o == nullptr || o->weights_.size() != weights_.size()) {
        throw std::logic_error("copy_from requires a LinearQ of identical shape");
    }
    weights_ = o->weights_;
}

double LinearQ::max_param_diff(const QFunction& other) const {
    const auto* o = dynamic_cast<const LinearQ*>(&other);
    if (o == nullptr || o->weights_.size() != weights_.size()) {
        throw std::logic_error("max_param_diff requires a LinearQ of identical shape");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        diff = std::max(diff, std::abs(weights_[i] - o->weights_[i]));
    }
    return diff;
}

} // namespace replaylab
