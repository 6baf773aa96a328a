#include "replaylab/trainer.hpp"

#include <deque>
#include <numeric>

#include "replaylab/errors.hpp"

namespace replaylab {

void validate(const TrainConfig& config) {
    if (config.alpha <= 0.0) {
        throw ConfigError("alpha must be positive");
    }
    if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) {
        throw ConfigError("gamma must be in [0, 1]");
    }
    if (config.epsilon.start < 0.0 || config.epsilon.start > 1.0 || config.epsilon.end < 0.0 ||
        config.epsilon.end > 1.0) {
        throw ConfigError("epsilon bounds must be in [0, 1]");
    }
    if (config.episodes == 0 || config.batch_size == 0 || config.target_sync_interval == 0) {
        throw ConfigError("episodes, batch_size and target_sync_interval must be positive");
    }
    validate(config.sampler);
}

double td_target(const Transition& t, const QFunction& target, double gamma) {
    if (t.done) {
        return t.reward;
    }
    return t.reward + gamma * target.max_value(t.next_state);
}

void apply_update(QFunction& q, const Transition& t, double y, double alpha) {
    q.update(t.state, t.action, y, alpha);
}

int act_epsilon_greedy(const QFunction& q, std::span<const double> state, double epsilon, Rng& rng) {
    if (rng.uniform() < epsilon) {
        return static_cast<int>(rng.below(static_cast<std::uint64_t>(q.action_count())));
    }
    return q.greedy_action(state);
}

void sync_target(const QFunction& q, QFunction& target) {
    target.copy_from(q);
}

std::vector<EpisodeStats> train(Env& env, const TrainConfig& config, Clusterer& clusterer,
                                ReplayBuffer& buffer, QFunction& q) {
    validate(config);
    const std::size_t max_steps = config.max_steps > 0
                                      ? config.max_steps
                                      : static_cast<std::size_t>(env.spec().max_steps);

    // Independent streams so e.g. adding batch draws never shifts the
    // behavior policy's randomness.
    Rng env_rng(mix_seed(config.seed, 0x656e76ull));
    Rng policy_rng(mix_seed(config.seed, 0x706f6cull));
    Rng sampler_rng(mix_seed(config.seed, 0x73616dull));

    auto target = q.clone();
    ClusterIndex index;
    const BatchRequest request{config.batch_size};

    std::vector<EpisodeStats> stats;
    stats.reserve(config.episodes);
    std::deque<double> reward_window;
    std::size_t global_step = 0;

    for (std::size_t episode = 1; episode <= config.episodes; ++episode) {
        std::vector<double> state = env.reset(env_rng);
        double total_reward = 0.0;
        std::size_t episode_steps = 0;

        for (std::size_t t = 0; t < max_steps; ++t) {
            const double eps = config.epsilon.at(global_step);
            const int action = act_epsilon_greedy(q, state, eps, policy_rng);
            StepResult step = env.step(action);
            total_reward += step.reward;
            ++episode_steps;
            ++global_step;

            Transition tr{state, action, step.reward, step.next_state, step.done};
            const auto inserted = buffer.insert(std::move(tr));
            if (inserted.evicted.has_value()) {
                const SlotId gone = inserted.evicted->slot;
                index.remove(gone, index.cluster_of(gone));
            }
            const ClusterCode code = clusterer.observe(state);
            if (clusterer.take_rebuild_flag()) {
                // The warmup fit just happened: reassign every buffered state
                // (including the one stored above) under the fitted model.
                index.clear();
                for (std::size_t i = 0; i < buffer.len(); ++i) {
                    index.insert(SlotId{i}, clusterer.assign(buffer.get(SlotId{i}).state));
                }
            } else {
                index.insert(inserted.slot, code);
            }

            if (buffer.len() >= config.warmup_transitions) {
                const auto batch = sample_batch(request, config.sampler, buffer, index, sampler_rng);
                for (const SlotId slot : batch) {
                    const Transition& sampled = buffer.get(slot);
                    apply_update(q, sampled, td_target(sampled, *target, config.gamma), config.alpha);
                }
            }
            if (global_step % config.target_sync_interval == 0) {
                sync_target(q, *target);
            }

            state = std::move(step.next_state);
            if (step.done) {
                break;
            }
        }

        reward_window.push_back(total_reward);
        if (reward_window.size() > 100) {
            reward_window.pop_front();
        }
        // Summed fresh so the window mean is bit-recomputable from the series.
        const double window_sum = std::accumulate(reward_window.begin(), reward_window.end(), 0.0);
        stats.push_back(EpisodeStats{episode, total_reward, episode_steps,
                                     window_sum / static_cast<double>(reward_window.size())});
    }
    return stats;
}

} // namespace replaylab
