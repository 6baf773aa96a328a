#pragma once

#include "replaylab/env.hpp"
#include "replaylab/finite_mdp.hpp"

namespace replaylab {

/// Left/right chain: states 0..n-1, start at 0, terminal at n-1 with
/// reward 1 on entry and 0 elsewhere. Moving left from state 0 stays.
/// With slip > 0 each action is inverted with that probability.
class ChainMdp : public Env {
public:
    struct Config {
        int n_states = 3;
        double slip = 0.0;
        int max_steps = 0; // 0 -> 8 * n_states
    };

    explicit ChainMdp(Config config);

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(Rng& rng) override;
    StepResult step(int action) override;

    /// Exact model; only available for the deterministic (slip = 0) chain.
    FiniteMdp finite_model() const;

    const Config& config() const { return config_; }

private:
    Config config_;
    EnvSpec spec_;
    int state_ = 0;
    int steps_ = 0;
    bool done_ = true;
    Rng slip_rng_{0};
};

} // namespace replaylab
