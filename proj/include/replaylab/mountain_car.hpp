#pragma once

#include "replaylab/env.hpp"

namespace replaylab {

/// Car on a hill with the classic control constants. Actions: 0 = push
/// left, 1 = coast, 2 = push right. Per step:
///
///   v <- clip(v + 0.001 * (a - 1) - 0.0025 * cos(3 x), -0.07, 0.07)
///   x <- clip(x + v, -1.2, 0.6); hitting the left wall resets v to 0
///
/// Start x ~ U[-0.6, -0.4), v = 0; done at x >= 0.5; reward -1 per step;
/// episode cap 200 steps.
class MountainCar : public Env {
public:
    static constexpr double kMinPosition = -1.2;
    static constexpr double kMaxPosition = 0.6;
    static constexpr double kMaxSpeed = 0.07;
    static constexpr double kGoalPosition = 0.5;
    static constexpr double kForce = 0.001;
    static constexpr double kGravity = 0.0025;

    explicit MountainCar(int max_steps = 200);

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(Rng& rng) override;
    StepResult step(int action) override;

    /// One application of the dynamics, exposed for oracle checks.
    static std::pair<double, double> dynamics(double x, double v, int action);

private:
    EnvSpec spec_;
    double x_ = 0.0;
    double v_ = 0.0;
    int steps_ = 0;
    bool done_ = true;
};

} // namespace replaylab
