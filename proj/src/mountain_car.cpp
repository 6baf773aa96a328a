#include "replaylab/mountain_car.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "replaylab/errors.hpp"

namespace replaylab {

MountainCar::MountainCar(int max_steps) {
    if (max_steps < 1) {
        throw ConfigError("mountain car max_steps must be positive");
    }
    spec_.state_dim = 2;
    spec_.action_count = 3;
    spec_.bounds = {{kMinPosition, kMaxPosition}, {-kMaxSpeed, kMaxSpeed}};
    spec_.max_steps = max_steps;
}

std::vector<double> MountainCar::reset(Rng& rng) {
    x_ = rng.uniform(-0.6, -0.4);
    v_ = 0.0;
    steps_ = 0;
    done_ = false;
    return {x_, v_};
}

std::pair<double, double> MountainCar::dynamics(double x, double v, int action) {
    v += kForce * static_cast<double>(action - 1) - kGravity * std::cos(3.0 * x);
    v = std::clamp(v, -kMaxSpeed, kMaxSpeed);
    x = std::clamp(x + v, kMinPosition, kMaxPosition);
    if (x == kMinPosition && v < 0.0) {
        v = 0.0;
    }
    return {x, v};
}

StepResult MountainCar::step(int action) {
    if (done_) {
        throw std::logic_error("step() on a finished episode");
    }
    if (action < 0 || action >= 3) {
        throw RejectedInput("mountain car action out of range");
    }
    std::tie(x_, v_) = dynamics(x_, v_, action);
    ++steps_;

    StepResult result;
    result.next_state = {x_, v_};
    result.reward = -1.0;
    result.done = x_ >= kGoalPosition || steps_ >= spec_.max_steps;
    done_ = result.done;
    return result;
}

} // namespace replaylab
