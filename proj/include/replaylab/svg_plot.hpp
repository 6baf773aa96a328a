#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "replaylab/metrics.hpp"

namespace replaylab {

/// Per-episode aggregate of one variant across its seeds.
struct PlotSeries {
    std::string label;
    std::vector<double> mean; // mean of mean_reward_100 across seeds
    std::vector<double> lo;   // min across seeds
    std::vector<double> hi;   // max across seeds
};

/// Groups metrics rows by (strategy, beta) and aggregates the smoothed reward
/// per episode. Throws AlignmentError when runs disagree on episode counts.
std::vector<PlotSeries> build_series(const std::vector<MetricsRow>& rows);

/// Renders learning curves as a standalone SVG: one line per variant plus a
/// translucent min-max band when the variant has more than one seed.
void write_reward_curve_svg(const std::filesystem::path& path,
                            const std::vector<PlotSeries>& series,
                            const std::string& title = "Learning curves");

} // namespace replaylab
