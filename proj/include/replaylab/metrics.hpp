#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace replaylab {

inline constexpr const char* kMetricsHeader =
    "run_id,strategy,beta,seed,episode,total_reward,mean_reward_100,wall_steps";

/// One episode of one run, as serialized to the metrics CSVs.
struct MetricsRow {
    std::string run_id;
    std::string strategy;
    double beta = 1.0;
    std::uint64_t seed = 0;
    std::size_t episode = 0;
    double total_reward = 0.0;
    double mean_reward_100 = 0.0;
    std::size_t wall_steps = 0; // cumulative environment steps at episode end
};

/// Shortest round-trippable decimal text for a double ("%.17g" fallback).
std::string format_double(double value);

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

/// (strategy, beta) pair identifying one experimental variant.
struct VariantKey {
    std::string strategy;
    double beta = 1.0;

    friend bool operator==(const VariantKey&, const VariantKey&) = default;
    std::string label() const;
};

struct VariantSummary {
    VariantKey variant;
    std::size_t runs = 0;
    double final100_mean = 0.0; // mean over runs of the final-100-episode reward
    double final100_sd = 0.0;   // population sd; 0 for a single run
    double auc_mean = 0.0;      // mean over runs of sum of mean_reward_100
};

struct PairwiseWins {
    VariantKey a;
    VariantKey b;
    std::size_t wins_a = 0; // seeds where AUC(a) > AUC(b)
    std::size_t wins_b = 0;
    std::size_t ties = 0;
};

struct CompareResult {
    std::vector<VariantSummary> summaries;
    std::vector<PairwiseWins> pairwise;
};

/// Aggregates rows into per-variant summaries and per-seed paired AUC win
/// counts. Throws AlignmentError when runs disagree on episode counts.
CompareResult compare_metrics(const std::vector<MetricsRow>& rows);

void write_summary_csv(const std::filesystem::path& path, const CompareResult& result);
std::string render_summary_table(const CompareResult& result);

} // namespace replaylab
