#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace replaylab {

/// Deterministic finite MDP: tabular dynamics for the planning oracle.
/// Terminal states are absorbing with value zero.
struct FiniteMdp {
    std::size_t n_states = 0;
    int n_actions = 0;
    std::vector<std::size_t> next;  // [s * n_actions + a] -> successor state
    std::vector<double> reward;     // [s * n_actions + a]
    std::vector<bool> terminal;     // per state
    std::size_t start = 0;

    std::size_t idx(std::size_t s, int a) const { return s * static_cast<std::size_t>(n_actions) + a; }

    /// States reachable from `from` under any action sequence.
    std::vector<bool> reachable_from(std::size_t from) const;
};

/// Optimal Q via synchronous Bellman backups until the sup-norm update falls
/// below tol. Works at gamma = 1 for episodic models; throws if max_iters
/// sweeps are not enough.
std::vector<double> value_iteration(const FiniteMdp& mdp, double gamma, double tol,
                                    std::size_t max_iters = 100000);

/// Sup-norm Bellman optimality residual of Q under the model.
double bellman_residual(const FiniteMdp& mdp, std::span<const double> q, double gamma);

} // namespace replaylab
