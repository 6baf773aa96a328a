#include "replaylab/finite_mdp.hpp"

#include <cmath>
#include <stdexcept>

#include "replaylab/errors.hpp"

namespace replaylab {

std::vector<bool> FiniteMdp::reachable_from(std::size_t from) const {
    std::vector<bool> seen(n_states, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        if (terminal[s]) {
            continue;
        }
        for (int a = 0; a < n_actions; ++a) {
            const std::size_t t = next[idx(s, a)];
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return seen;
}

std::vector<double> value_iteration(const FiniteMdp& mdp, double gamma, double tol,
                                    std::size_t max_iters) {
    if (mdp.n_states == 0 || mdp.n_actions <= 0) {
        throw ConfigError("value iteration needs a nonempty model");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("gamma must be in [0, 1]");
    }
    std::vector<double> q(mdp.n_states * static_cast<std::size_t>(mdp.n_actions), 0.0);
    std::vector<double> fresh(q.size(), 0.0);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        double delta = 0.0;
        for (std::size_t s = 0; s < mdp.n_states; ++s) {
            for (int a = 0; a < mdp.n_actions; ++a) {
                const std::size_t i = mdp.idx(s, a);
                double value = 0.0;
                if (!mdp.terminal[s]) {
                    const std::size_t t = mdp.next[i];
                    double best = 0.0;
                    if (!mdp.terminal[t]) {
                        best = q[mdp.idx(t, 0)];
                        for (int b = 1; b < mdp.n_actions; ++b) {
                            best = std::max(best, q[mdp.idx(t, b)]);
                        }
                    }
                    value = mdp.reward[i] + gamma * best;
                }
                fresh[i] = value;
                delta = std::max(delta, std::abs(value - q[i]));
            }
        }
        q.swap(fresh);
        if (delta < tol) {
            return q;
        }
    }
    throw std::runtime_error("value iteration did not converge within the iteration cap");
}

double bellman_residual(const FiniteMdp& mdp, std::span<const double> q, double gamma) {
    double residual = 0.0;
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
        if (mdp.terminal[s]) {
            continue;
        }
        for (int a = 0; a < mdp.n_actions; ++a) {
            const std::size_t i = mdp.idx(s, a);
            const std::size_t t = mdp.next[i];
            double best = 0.0;
            if (!mdp.terminal[t]) {
                best = q[mdp.idx(t, 0)];
                for (int b = 1; b < mdp.n_actions; ++b) {
                    best = std::max(best, q[mdp.idx(t, b)]);
                }
            }
            residual = std::max(residual, std::abs(q[i] - (mdp.reward[i] + gamma * best)));
        }
    }
    return residual;
}

} // namespace replaylab
