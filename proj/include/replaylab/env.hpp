#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "replaylab/rng.hpp"

namespace replaylab {

struct EnvSpec {
    std::size_t state_dim = 0;
    int action_count = 0;
    std::vector<std::pair<double, double>> bounds; // per-dimension [lo, hi]
    int max_steps = 0;                             // episode cap T
};

struct StepResult {
    std::vector<double> next_state;
    double reward = 0.0;
    bool done = false;
};

/// Episodic environment, a pure function of the reset rng draws and the
/// action sequence. done is forced once the step count reaches max_steps.
class Env {
public:
    virtual ~Env() = default;

    virtual const EnvSpec& spec() const = 0;
    virtual std::vector<double> reset(Rng& rng) = 0;
    virtual StepResult step(int action) = 0;
};

} // namespace replaylab
