#include "replaylab/chain_mdp.hpp"

#include <stdexcept>

#include "replaylab/errors.hpp"

namespace replaylab {

ChainMdp::ChainMdp(Config config) : config_(config) {
    if (config_.n_states < 2) {
        throw ConfigError("chain needs at least 2 states");
    }
    if (config_.slip < 0.0 || config_.slip >= 1.0) {
        throw ConfigError("chain slip must be in [0, 1)");
    }
    if (config_.max_steps <= 0) {
        config_.max_steps = 8 * config_.n_states;
    }
    spec_.state_dim = 1;
    spec_.action_count = 2;
    spec_.bounds = {{0.0, static_cast<double>(config_.n_states - 1)}};
    spec_.max_steps = config_.max_steps;
}

std::vector<double> ChainMdp::reset(Rng& rng) {
    state_ = 0;
    steps_ = 0;
    done_ = false;
    if (config_.slip > 0.0) {
        slip_rng_ = Rng(rng.next_u64());
    }
    return {0.0};
}

StepResult ChainMdp::step(int action) {
    if (done_) {
        throw std::logic_error("step() on a finished episode");
    }
    if (action < 0 || action >= 2) {
        throw RejectedInput("chain action out of range");
    }
    int effective = action;
    if (config_.slip > 0.0 && slip_rng_.uniform() < config_.slip) {
        effective = 1 - action;
    }
    state_ += (effective == 1) ? 1 : -1;
    if (state_ < 0) {
        state_ = 0;
    }
    ++steps_;

    StepResult result;
    result.next_state = {static_cast<double>(state_)};
    const bool at_terminal = state_ == config_.n_states - 1;
    result.reward = at_terminal ? 1.0 : 0.0;
    result.done = at_terminal || steps_ >= config_.max_steps;
    done_ = result.done;
    return result;
}

FiniteMdp ChainMdp::finite_model() const {
    if (config_.slip != 0.0) {
        throw ConfigError("finite model is only exact for slip = 0");
    }
    FiniteMdp mdp;
    mdp.n_states = static_cast<std::size_t>(config_.n_states);
    mdp.n_actions = 2;
    mdp.next.resize(mdp.n_states * 2);
    mdp.reward.resize(mdp.n_states * 2);
    mdp.terminal.assign(mdp.n_states, false);
    mdp.terminal[mdp.n_states - 1] = true;
    mdp.start = 0;
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < 2; ++a) {
            std::size_t t = s;
            if (a == 1) {
                t = s + 1;
            } else if (s > 0) {
                t = s - 1;
            }
            mdp.next[mdp.idx(s, a)] = t;
            mdp.reward[mdp.idx(s, a)] = (t == mdp.n_states - 1) ? 1.0 : 0.0;
        }
    }
    return mdp;
}

} // namespace replaylab
