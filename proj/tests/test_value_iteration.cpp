#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "replaylab/chain_mdp.hpp"
#include "replaylab/finite_mdp.hpp"
#include "replaylab/gridworld.hpp"

using namespace replaylab;

TEST_CASE("value iteration reproduces the chain's closed form") {
    // Deterministic chain of n states, reward 1 on entering the end:
    //   Q*(s, right) = gamma^(n-2-s), Q*(s, left) = gamma * V*(max(s-1, 0)).
    for (const int n : {3, 5, 8}) {
        const double gamma = 0.9;
        const FiniteMdp mdp = ChainMdp({n, 0.0, 0}).finite_model();
        const auto q = value_iteration(mdp, gamma, 1e-12);

        for (int s = 0; s + 1 < n; ++s) {
            const double right = std::pow(gamma, n - 2 - s);
            const double v_left_of = std::pow(gamma, n - 2 - std::max(s - 1, 0));
            CHECK(q[mdp.idx(s, 1)] == doctest::Approx(right).epsilon(1e-10));
            CHECK(q[mdp.idx(s, 0)] == doctest::Approx(gamma * v_left_of).epsilon(1e-10));
        }
    }
}

TEST_CASE("value iteration handles episodic gamma = 1") {
    // Open gridworld, step reward -1: V*(cell) = -(Manhattan distance to
    // goal), exactly.
    Gridworld::Config config;
    config.width = 5;
    config.height = 4;
    Gridworld env(config);
    const FiniteMdp mdp = env.finite_model();
    const auto q = value_iteration(mdp, 1.0, 1e-12);

    for (int x = 0; x < config.width; ++x) {
        for (int y = 0; y < config.height; ++y) {
            const std::size_t s = env.cell_index(x, y);
            if (mdp.terminal[s]) {
                continue;
            }
            double v = q[mdp.idx(s, 0)];
            for (int a = 1; a < 4; ++a) {
                v = std::max(v, q[mdp.idx(s, a)]);
            }
            const double distance = std::abs(x - 4) + std::abs(y - 3);
            CHECK(v == doctest::Approx(-distance).epsilon(1e-10));
        }
    }
}

TEST_CASE("terminal rows are zero") {
    const FiniteMdp mdp = ChainMdp({4, 0.0, 0}).finite_model();
    const auto q = value_iteration(mdp, 0.95, 1e-12);
    CHECK(q[mdp.idx(3, 0)] == 0.0);
    CHECK(q[mdp.idx(3, 1)] == 0.0);
}

TEST_CASE("bellman residual is tiny at the fixpoint and large off it") {
    const FiniteMdp mdp = ChainMdp({6, 0.0, 0}).finite_model();
    const double gamma = 0.9;
    auto q = value_iteration(mdp, gamma, 1e-12);
    CHECK(bellman_residual(mdp, q, gamma) < 1e-10);

    q[mdp.idx(0, 1)] += 0.25;
    CHECK(bellman_residual(mdp, q, gamma) >= 0.2);
}

TEST_CASE("value iteration reports non-convergence") {
    // A single non-terminal state looping onto itself with reward -1 has
    // no finite gamma = 1 value.
    FiniteMdp mdp;
    mdp.n_states = 1;
    mdp.n_actions = 1;
    mdp.next = {0};
    mdp.reward = {-1.0};
    mdp.terminal = {false};
    CHECK_THROWS_AS(value_iteration(mdp, 1.0, 1e-9, 100), std::runtime_error);
}

TEST_CASE("reachability over the walled grid") {
    // Walls that seal off the right column make it unreachable.
    Gridworld::Config config;
    config.width = 3;
    config.height = 2;
    config.goal = {0, 1};
    config.walls = {{1, 0}, {1, 1}};
    Gridworld env(config);
    const FiniteMdp mdp = env.finite_model();

    const auto reachable = mdp.reachable_from(mdp.start);
    CHECK(reachable[env.cell_index(0, 0)]);
    CHECK(reachable[env.cell_index(0, 1)]);
    CHECK_FALSE(reachable[env.cell_index(2, 0)]);
    CHECK_FALSE(reachable[env.cell_index(2, 1)]);
}
