#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "replaylab/errors.hpp"
#include "replaylab/experiment.hpp"
#include "replaylab/metrics.hpp"
#include "replaylab/rng.hpp"
#include "replaylab/svg_plot.hpp"

namespace {

using namespace replaylab;

constexpr int kExitOk = 0;
constexpr int kExitFault = 1;
constexpr int kExitConfig = 2;

/// Config-key overrides shared by the experiment-driving subcommands.
/// Values are applied over the config file, so flags always win.
struct Overrides {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { entries.emplace_back(key, v); }, help);
    }
};

void add_common_overrides(CLI::App* cmd, Overrides& ov) {
    ov.add(cmd, "--env", "env", "Environment: gridworld, chain or mountain_car");
    ov.add(cmd, "--buffer-size", "buffer_size", "Replay buffer capacity");
    ov.add(cmd, "--clusters", "clusters", "Cluster count (k for kmeans, code budget for simhash)");
    ov.add(cmd, "--clusterer", "clusterer", "Clustering scheme: simhash or kmeans");
    ov.add(cmd, "--cluster-warmup", "cluster_warmup", "States collected before the k-means fit");
    ov.add(cmd, "--master-seed", "master_seed", "Master seed deriving all per-run streams");
    ov.add(cmd, "--grid-width", "grid_width", "Gridworld width");
    ov.add(cmd, "--grid-height", "grid_height", "Gridworld height");
    ov.add(cmd, "--chain-states", "chain_states", "Chain length");
    ov.add(cmd, "--max-steps", "max_steps", "Per-episode step cap (0 = env default)");
}

void add_train_overrides(CLI::App* cmd, Overrides& ov) {
    ov.add(cmd, "--strategy", "strategies",
           "Comma list of uniform, equal_cluster, distribution_aware");
    ov.add(cmd, "--beta", "betas", "Comma list of interpolation weights for distribution_aware");
    ov.add(cmd, "--seeds", "seeds", "Comma list of run seeds");
    ov.add(cmd, "--episodes", "episodes", "Episodes per run");
    ov.add(cmd, "--alpha", "alpha", "Learning rate");
    ov.add(cmd, "--gamma", "gamma", "Discount factor");
    ov.add(cmd, "--epsilon-start", "epsilon_start", "Initial exploration rate");
    ov.add(cmd, "--epsilon-end", "epsilon_end", "Final exploration rate");
    ov.add(cmd, "--epsilon-fraction", "epsilon_fraction",
           "Share of the step budget spent annealing epsilon");
    ov.add(cmd, "--batch-size", "batch_size", "Transitions per update batch");
    ov.add(cmd, "--warmup", "warmup_transitions", "Stored transitions required before updates");
    ov.add(cmd, "--sync-interval", "target_sync_interval",
           "Environment steps between target refreshes");
    ov.add(cmd, "--bins", "bins", "Per-dimension bins for continuous observations");
    ov.add(cmd, "--jobs", "jobs", "Worker threads for the sweep");
}

ExperimentConfig resolve_config(const std::optional<std::string>& config_path,
                                const Overrides& ov) {
    ExperimentConfig config =
        config_path ? load_config_file(*config_path) : ExperimentConfig{};
    for (const auto& [key, value] : ov.entries) {
        apply_config_entry(config, key, value);
    }
    return config;
}

std::vector<MetricsRow> read_all_metrics(const std::vector<std::string>& files) {
    std::vector<MetricsRow> rows;
    for (const auto& file : files) {
        auto part = read_metrics_csv(file);
        rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
    }
    return rows;
}

int cmd_run(const std::optional<std::string>& config_path, const Overrides& ov,
            const std::optional<std::string>& out_dir) {
    ExperimentConfig config = resolve_config(config_path, ov);
    if (out_dir) {
        config.out_dir = *out_dir;
    }
    const auto plans = enumerate_runs(config);
    std::cout << "running " << plans.size() << " run(s) on " << config.env << " into "
              << config.out_dir.string() << "\n";
    const auto merged = run_sweep(config);
    std::cout << "wrote " << (config.out_dir / "metrics.csv").string() << " (" << merged.size()
              << " rows)\n";
    std::cout << render_summary_table(compare_metrics(merged));
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& out_file) {
    const auto rows = read_all_metrics(files);
    const auto result = compare_metrics(rows);
    std::cout << render_summary_table(result);
    write_summary_csv(out_file, result);
    std::cout << "wrote " << out_file << "\n";
    return kExitOk;
}

int cmd_plot(const std::vector<std::string>& files, const std::string& out_file,
             const std::string& title) {
    const auto rows = read_all_metrics(files);
    const auto series = build_series(rows);
    write_reward_curve_svg(out_file, series, title);
    std::cout << "wrote " << out_file << " (" << series.size() << " series)\n";
    return kExitOk;
}

/// Shared by audit and cluster-report: a random-policy fill of a fresh
/// buffer + index, deterministic in the master seed.
struct FilledBuffer {
    std::unique_ptr<Env> env;
    std::unique_ptr<Clusterer> clusterer;
    std::unique_ptr<ReplayBuffer> buffer;
    ClusterIndex index;
};

FilledBuffer fill_for_inspection(const ExperimentConfig& config, std::size_t steps) {
    FilledBuffer f;
    f.env = make_env(config);
    const std::size_t state_dim = f.env->spec().state_dim;
    f.buffer = std::make_unique<ReplayBuffer>(config.buffer_size, state_dim);
    f.clusterer = make_clusterer(config, state_dim, mix_seed(config.master_seed, 0x66696c6cull));
    Rng rng(mix_seed(config.master_seed, 0x77616c6bull));
    fill_random_policy(*f.env, steps, *f.buffer, *f.clusterer, f.index, rng);
    return f;
}

int cmd_audit(const std::optional<std::string>& config_path, const Overrides& ov,
              std::size_t steps, std::size_t draws, const std::string& strategy_name_arg,
              double beta, bool inject_corruption) {
    ExperimentConfig config = resolve_config(config_path, ov);
    const auto strategy = parse_strategy(strategy_name_arg);
    if (!strategy) {
        throw ConfigError("unknown strategy '" + strategy_name_arg + "'");
    }
    const SamplerConfig sampler{*strategy, beta};
    validate(sampler);

    FilledBuffer f = fill_for_inspection(config, steps);
    if (inject_corruption && f.buffer->len() > 0) {
        // Legal removal with no reinsert: the index now undercounts.
        f.index.remove(SlotId{0}, f.index.cluster_of(SlotId{0}));
    }

    Rng rng(mix_seed(config.master_seed, 0x61756469ull));
    const AuditReport report = audit_distribution(draws, sampler, *f.buffer, f.index, rng);

    std::printf("audited %zu slots over %zu draws (strategy %s, beta %s)\n", report.rows.size(),
                report.draws, strategy_name(sampler.strategy), format_double(beta).c_str());
    std::printf("analytic sum %.12f, max |empirical - analytic| %.3e\n", report.analytic_sum,
                report.max_deviation);
    auto worst = report.rows;
    std::sort(worst.begin(), worst.end(),
              [](const AuditRow& a, const AuditRow& b) { return a.deviation > b.deviation; });
    std::printf("%8s %12s %12s %12s %12s\n", "slot", "analytic", "empirical", "deviation",
                "bound");
    for (std::size_t i = 0; i < std::min<std::size_t>(5, worst.size()); ++i) {
        const auto& r = worst[i];
        std::printf("%8zu %12.6f %12.6f %12.3e %12.3e\n", r.slot.index, r.analytic, r.empirical,
                    r.deviation, r.bound);
    }
    if (!report.passed) {
        std::cout << "audit FAILED: empirical frequencies left the statistical bound\n";
        return kExitFault;
    }
    std::cout << "audit passed\n";
    return kExitOk;
}

int cmd_cluster_report(const std::optional<std::string>& config_path, const Overrides& ov,
                       std::size_t steps, const std::string& out_file, double top_fraction) {
    ExperimentConfig config = resolve_config(config_path, ov);
    FilledBuffer f = fill_for_inspection(config, steps);

    const auto rows = cluster_report(f.index);
    write_cluster_report_csv(out_file, rows);
    const double share = top_share(rows, top_fraction);
    std::printf("%zu transitions across %zu nonempty clusters\n", f.index.total(), rows.size());
    std::printf("top %.0f%% of clusters hold %.1f%% of transitions\n", top_fraction * 100.0,
                share * 100.0);
    std::cout << "wrote " << out_file << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replay-sampling experiment harness: cluster-aware batch sampling "
                 "for tabular Q-learning on small benchmark tasks"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;

    // run
    auto* run = app.add_subcommand("run", "Run a strategy-comparison sweep and write metrics CSVs");
    run->add_option("--config", config_path, "Flat key = value config file");
    Overrides run_ov;
    add_common_overrides(run, run_ov);
    add_train_overrides(run, run_ov);
    run->add_option("--out", out_dir, "Output directory for run and merged CSVs");

    // compare
    auto* compare = app.add_subcommand("compare", "Summarize metrics CSVs per strategy");
    std::vector<std::string> compare_files;
    std::string summary_out = "summary.csv";
    compare->add_option("files", compare_files, "Metrics CSV files")->required();
    compare->add_option("--out", summary_out, "Summary CSV path");

    // plot
    auto* plot = app.add_subcommand("plot", "Render learning curves from metrics CSVs as SVG");
    std::vector<std::string> plot_files;
    std::string plot_out = "reward_curves.svg";
    std::string plot_title = "Learning curves";
    plot->add_option("files", plot_files, "Metrics CSV files")->required();
    plot->add_option("--out", plot_out, "SVG output path");
    plot->add_option("--title", plot_title, "Chart title");

    // audit
    auto* audit = app.add_subcommand(
        "audit", "Check empirical sampling frequencies against the analytic distribution");
    std::optional<std::string> audit_config;
    Overrides audit_ov;
    std::size_t audit_steps = 4000;
    std::size_t audit_draws = 200000;
    std::string audit_strategy = "distribution_aware";
    double audit_beta = 0.5;
    bool inject_corruption = false;
    audit->add_option("--config", audit_config, "Flat key = value config file");
    add_common_overrides(audit, audit_ov);
    audit->add_option("--steps", audit_steps, "Random-policy steps used to fill the buffer");
    audit->add_option("--draws", audit_draws, "Single-sample draws for the empirical estimate");
    audit->add_option("--strategy", audit_strategy, "Strategy to audit");
    audit->add_option("--beta", audit_beta, "Interpolation weight for distribution_aware");
    audit->add_flag("--inject-corruption", inject_corruption,
                    "Deliberately desync the index first (the audit must then fail)");

    // cluster-report
    auto* report = app.add_subcommand(
        "cluster-report", "Histogram of cluster occupancy under a random-policy fill");
    std::optional<std::string> report_config;
    Overrides report_ov;
    std::size_t report_steps = 100000;
    std::string report_out = "clusters.csv";
    double top_fraction = 0.2;
    report->add_option("--config", report_config, "Flat key = value config file");
    add_common_overrides(report, report_ov);
    report->add_option("--steps", report_steps, "Random-policy steps used to fill the buffer");
    report->add_option("--out", report_out, "Histogram CSV path");
    report->add_option("--top-fraction", top_fraction,
                       "Cluster share quoted in the console summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Anything other than a clean --help/--version is a usage error.
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, run_ov, out_dir);
        }
        if (compare->parsed()) {
            return cmd_compare(compare_files, summary_out);
        }
        if (plot->parsed()) {
            return cmd_plot(plot_files, plot_out, plot_title);
        }
        if (audit->parsed()) {
            return cmd_audit(audit_config, audit_ov, audit_steps, audit_draws, audit_strategy,
                             audit_beta, inject_corruption);
        }
        if (report->parsed()) {
            return cmd_cluster_report(report_config, report_ov, report_steps, report_out,
                                      top_fraction);
        }
        std::cerr << "no subcommand given\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFault;
    }
}
