#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "replaylab/clusterer.hpp"
#include "replaylab/env.hpp"
#include "replaylab/q_function.hpp"
#include "replaylab/replay_buffer.hpp"
#include "replaylab/sampling.hpp"
#include "replaylab/transition.hpp"

namespace replaylab {

/// Linear anneal from start to end over anneal_steps, then flat at end.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    std::size_t anneal_steps = 0;

    double at(std::size_t step) const {
        if (anneal_steps == 0 || step >= anneal_steps) {
            return end;
        }
        const double t = static_cast<double>(step) / static_cast<double>(anneal_steps);
        return start + (end - start) * t;
    }
};

struct TrainConfig {
    double alpha = 0.1;                      // learning rate
    double gamma = 0.99;                     // discount
    EpsilonSchedule epsilon;                 // behavior policy exploration
    std::size_t episodes = 500;              // M
    std::size_t max_steps = 0;               // per-episode cap T; 0 = env default
    std::size_t target_sync_interval = 500;  // K, counted in environment steps
    std::size_t batch_size = 32;             // B
    std::size_t warmup_transitions = 1000;   // no updates before this many stored
    SamplerConfig sampler;
    std::uint64_t seed = 0;
};

void validate(const TrainConfig& config);

struct EpisodeStats {
    std::size_t episode = 0; // 1-based
    double total_reward = 0.0;
    std::size_t steps = 0;
    double mean_reward_100 = 0.0; // trailing mean over the last <= 100 episodes
};

/// TD target: r if done, else r + gamma * max_a' targetQ(next_state, a').
double td_target(const Transition& t, const QFunction& target, double gamma);

/// One TD step of q toward y at (t.state, t.action).
void apply_update(QFunction& q, const Transition& t, double y, double alpha);

/// With probability epsilon a uniform action, else the greedy one
/// (ties to the lowest index).
int act_epsilon_greedy(const QFunction& q, std::span<const double> state, double epsilon, Rng& rng);

/// Copies q's parameters into target.
void sync_target(const QFunction& q, QFunction& target);

/// Full training loop: act, step, store, cluster and count, sample a batch
/// per the configured strategy, compute targets against the frozen copy,
/// update, and resync the frozen copy every K environment steps. Updates
/// start only once warmup_transitions are stored. Fully reproducible from
/// config.seed.
std::vector<EpisodeStats> train(Env& env, const TrainConfig& config, Clusterer& clusterer,
                                ReplayBuffer& buffer, QFunction& q);

} // namespace replaylab
