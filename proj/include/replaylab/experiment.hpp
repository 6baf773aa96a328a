#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "replaylab/cluster_index.hpp"
#include "replaylab/clusterer.hpp"
#include "replaylab/env.hpp"
#include "replaylab/metrics.hpp"
#include "replaylab/q_function.hpp"
#include "replaylab/replay_buffer.hpp"
#include "replaylab/sampling.hpp"
#include "replaylab/trainer.hpp"

namespace replaylab {

enum class ClustererKind { SimHash, KMeans };

const char* clusterer_name(ClustererKind kind);

/// Everything a sweep needs: the environment, the learner, the replay
/// pipeline and the (strategy, beta, seed) grid. Loadable from a flat
/// key=value file; every key can also be set directly (CLI flags win).
struct ExperimentConfig {
    // environment
    std::string env = "gridworld"; // gridworld | chain | mountain_car
    int grid_width = 10;
    int grid_height = 10;
    int chain_states = 8;
    std::size_t max_steps = 0; // per-episode cap; 0 = env default

    // learner
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_fraction = 0.1; // anneal over this share of the step budget
    std::size_t episodes = 500;
    std::size_t target_sync_interval = 500;
    std::size_t batch_size = 32;
    std::size_t warmup_transitions = 1000;
    std::size_t bins = 40; // per-dimension bins for continuous observations

    // replay + clustering
    std::size_t buffer_size = 50000;
    ClustererKind clusterer = ClustererKind::SimHash;
    std::size_t clusters = 64;
    std::size_t cluster_warmup = 2000; // k-means fit sample count

    // sweep grid
    std::vector<Strategy> strategies{Strategy::Uniform, Strategy::DistributionAware};
    std::vector<double> betas{0.5};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::uint64_t master_seed = 2024;
    std::filesystem::path out_dir = "out";
    std::size_t jobs = 1;
};

/// Sets one config field by key (the file format's keys). List-valued keys
/// (strategies, betas, seeds) take comma-separated values. Unknown keys and
/// unparsable values throw ConfigError.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

/// Parses a flat `key = value` file ('#' starts a comment) over the
/// defaults.
ExperimentConfig load_config_file(const std::filesystem::path& path);

void validate(const ExperimentConfig& config);

/// One cell of the sweep grid.
struct RunPlan {
    std::string run_id;
    Strategy strategy = Strategy::Uniform;
    double beta = 1.0; // effective interpolation weight (1 / 0 / config beta)
    std::uint64_t seed = 0;
    std::uint64_t stream_seed = 0; // drives every random draw of the run
};

/// `strategy[_b<beta>]_s<seed>`; the beta part appears only for
/// distribution_aware.
std::string run_id_for(Strategy strategy, double beta, std::uint64_t seed);

/// Chained hash of (master seed, strategy, beta, seed), so extending the
/// grid never perturbs existing runs' randomness.
std::uint64_t run_stream_seed(std::uint64_t master_seed, Strategy strategy, double beta,
                              std::uint64_t seed);

/// Grid expansion in deterministic order: strategies x (betas for
/// distribution_aware, a single cell otherwise) x seeds.
std::vector<RunPlan> enumerate_runs(const ExperimentConfig& config);

std::unique_ptr<Env> make_env(const ExperimentConfig& config);

/// Per-cell uniform binning: exactly one bin per lattice point for the
/// integer-valued environments, config.bins per dimension otherwise.
Discretizer make_discretizer(const ExperimentConfig& config, const Env& env);

std::unique_ptr<Clusterer> make_clusterer(const ExperimentConfig& config, std::size_t state_dim,
                                          std::uint64_t stream_seed);

/// Trains one grid cell and returns its per-episode rows (wall_steps is the
/// running total of environment steps).
std::vector<MetricsRow> execute_run(const ExperimentConfig& config, const RunPlan& plan);

/// Runs the whole grid (config.jobs threads), writes out_dir/run_<id>.csv
/// per run plus the merged out_dir/metrics.csv, and returns the merged rows
/// in grid order.
std::vector<MetricsRow> run_sweep(const ExperimentConfig& config);

/// Cluster histogram row; rows are sorted by count descending (ties by
/// code ascending) and cumulative_share reaches 1 on the last row.
struct ClusterReportRow {
    ClusterCode code = 0;
    std::size_t count = 0;
    double share = 0.0;
    double cumulative_share = 0.0;
};

std::vector<ClusterReportRow> cluster_report(const ClusterIndex& index);

void write_cluster_report_csv(const std::filesystem::path& path,
                              const std::vector<ClusterReportRow>& rows);

/// Share of transitions held by the top ceil(fraction * clusters) clusters.
double top_share(const std::vector<ClusterReportRow>& rows, double fraction);

/// Fills buffer and index by running a uniform-random policy, maintaining
/// the index exactly as training does (evictions, k-means rebuild).
void fill_random_policy(Env& env, std::size_t steps, ReplayBuffer& buffer, Clusterer& clusterer,
                        ClusterIndex& index, Rng& rng);

} // namespace replaylab
