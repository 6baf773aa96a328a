#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace replaylab {

/// Per-dimension binning of a continuous state into one flat row index.
/// Flattening is row-major over the dimensions in order.
class Discretizer {
public:
    /// Interior edges per dimension; a dimension with edges e_0 < ... < e_m
    /// has m+1 bins and x falls into the bin of the first edge above it.
    explicit Discretizer(std::vector<std::vector<double>> edges);

    /// bins[i] uniform bins across bounds[i] for each dimension.
    static Discretizer uniform(const std::vector<std::pair<double, double>>& bounds,
                               const std::vector<std::size_t>& bins);

    std::size_t bin(std::size_t dim, double x) const;
    std::size_t flat_index(std::span<const double> state) const;
    std::size_t bins(std::size_t dim) const { return edges_[dim].size() + 1; }
    std::size_t total_bins() const { return total_bins_; }
    std::size_t dims() const { return edges_.size(); }

private:
    std::vector<std::vector<double>> edges_;
    std::size_t total_bins_ = 1;
};

/// State-action value function: the learned parameters plus the TD update
/// rule for its representation.
class QFunction {
public:
    virtual ~QFunction() = default;

    virtual int action_count() const = 0;
    virtual double value(std::span<const double> state, int action) const = 0;
    /// One TD step toward `target`:
    ///   Q(s,a) += alpha * (target - Q(s,a))
    /// in whatever form the representation supports.
    virtual void update(std::span<const double> state, int action, double target, double alpha) = 0;
    virtual std::unique_ptr<QFunction> clone() const = 0;
    /// Overwrites parameters with other's; shapes must match.
    virtual void copy_from(const QFunction& other) = 0;
    /// Largest absolute parameter difference; 0 right after copy_from.
    virtual double max_param_diff(const QFunction& other) const = 0;

    double max_value(std::span<const double> state) const;
    /// Argmax over actions, ties to the lowest index.
    int greedy_action(std::span<const double> state) const;
};

/// Dense table of bins x actions.
class TabularQ : public QFunction {
public:
    TabularQ(Discretizer discretizer, int action_count);

    int action_count() const override { return action_count_; }
    double value(std::span<const double> state, int action) const override;
    void update(std::span<const double> state, int action, double target, double alpha) override;
    std::unique_ptr<QFunction> clone() const override;
    void copy_from(const QFunction& other) override;
    double max_param_diff(const QFunction& other) const override;

    const Discretizer& discretizer() const { return discretizer_; }
    const std::vector<double>& table() const { return table_; }
    double at(std::size_t row, int action) const { return table_[row * action_count_ + action]; }

private:
    Discretizer discretizer_;
    int action_count_;
    std::vector<double> table_; // row-major rows x actions
};

/// Per-action linear value w_a . phi(s); the update is the half-gradient
/// rule w_a += alpha * (target - w_a . phi(s)) * phi(s).
class LinearQ : public QFunction {
public:
    using FeatureFn = std::function<std::vector<double>(std::span<const double>)>;

    LinearQ(int action_count, std::size_t feature_dim, FeatureFn features);

    /// One-hot features over a discretizer; reproduces TabularQ exactly.
    static LinearQ one_hot(Discretizer discretizer, int action_count);

    int action_count() const override { return action_count_; }
    double value(std::span<const double> state, int action) const override;
    void update(std::span<const double> state, int action, double target, double alpha) override;
    std::unique_ptr<QFunction> clone() const override;
    void copy_from(const QFunction& other) override;
    double max_param_diff(const QFunction& other) const override;

    const std::vector<double>& weights() const { return weights_; }

private:
    int action_count_;
    std::size_t feature_dim_;
    FeatureFn features_;
    std::vector<double> weights_; // row-major actions x feature_dim
};

} // namespace replaylab
