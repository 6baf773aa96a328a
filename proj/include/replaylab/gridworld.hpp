#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <utility>

#include "replaylab/env.hpp"
#include "replaylab/finite_mdp.hpp"

namespace replaylab {

/// Deterministic four-action grid. Actions: 0 = up (y-1), 1 = down (y+1),
/// 2 = left (x-1), 3 = right (x+1). Moving into a wall or off the grid
/// keeps the position; every step pays step_reward, entering the goal adds
/// goal_reward and ends the episode. The state is (x, y) as reals.
class Gridworld : public Env {
public:
    struct Config {
        int width = 10;
        int height = 10;
        std::pair<int, int> start{0, 0};
        std::pair<int, int> goal{-1, -1}; // default: opposite corner
        std::set<std::pair<int, int>> walls;
        double step_reward = -1.0;
        double goal_reward = 0.0;
        int max_steps = 0; // 0 -> 2 * (width + height)
    };

    explicit Gridworld(Config config);

    /// Parses the plain-text grid format: '#' wall, 'S' start, 'G' goal,
    /// '.' free, one row per line.
    static Gridworld from_map(const std::string& text, double step_reward = -1.0,
                              double goal_reward = 0.0, int max_steps = 0);
    static Gridworld from_map_file(const std::filesystem::path& path, double step_reward = -1.0,
                                   double goal_reward = 0.0, int max_steps = 0);

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(Rng& rng) override;
    StepResult step(int action) override;

    /// Row-major cell id, x * height + y; matches the flat index a uniform
    /// per-cell tabular discretizer produces for the (x, y) state.
    std::size_t cell_index(int x, int y) const;

    /// Finite model over all cells (walls become self-loops) for the
    /// value-iteration oracle. State ids follow cell_index.
    FiniteMdp finite_model() const;

    const Config& config() const { return config_; }

private:
    bool blocked(int x, int y) const;

    Config config_;
    EnvSpec spec_;
    int x_ = 0;
    int y_ = 0;
    int steps_ = 0;
    bool done_ = true;
};

} // namespace replaylab
