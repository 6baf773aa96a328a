#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "replaylab/errors.hpp"
#include "replaylab/experiment.hpp"
#include "replaylab/gridworld.hpp"

using namespace replaylab;

namespace {

std::filesystem::path scratch_dir(const std::string& leaf) {
    const auto dir = std::filesystem::temp_directory_path() / "replaylab_test_experiment" / leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Small, fast sweep: 3x3 gridworld, a handful of short episodes.
ExperimentConfig tiny_config() {
    ExperimentConfig config;
    config.env = "gridworld";
    config.grid_width = 3;
    config.grid_height = 3;
    config.episodes = 10;
    config.warmup_transitions = 50;
    config.batch_size = 8;
    config.buffer_size = 500;
    config.clusters = 4;
    config.cluster_warmup = 50;
    config.seeds = {1, 2};
    config.betas = {0.5};
    return config;
}

} // namespace

TEST_CASE("config entries parse into their fields") {
    ExperimentConfig c;
    apply_config_entry(c, "env", "chain");
    CHECK(c.env == "chain");
    apply_config_entry(c, "grid_width", "7");
    CHECK(c.grid_width == 7);
    apply_config_entry(c, "alpha", "0.05");
    CHECK(c.alpha == 0.05);
    apply_config_entry(c, "episodes", "1500");
    CHECK(c.episodes == 1500);
    apply_config_entry(c, "buffer_size", "10000");
    CHECK(c.buffer_size == 10000);
    apply_config_entry(c, "clusterer", "kmeans");
    CHECK(c.clusterer == ClustererKind::KMeans);
    apply_config_entry(c, "clusterer", "simhash");
    CHECK(c.clusterer == ClustererKind::SimHash);
    apply_config_entry(c, "strategies", "uniform, equal_cluster,distribution_aware");
    REQUIRE(c.strategies.size() == 3);
    CHECK(c.strategies[0] == Strategy::Uniform);
    CHECK(c.strategies[1] == Strategy::EqualCluster);
    CHECK(c.strategies[2] == Strategy::DistributionAware);
    apply_config_entry(c, "betas", "0, 0.25, 1");
    CHECK(c.betas == std::vector<double>{0.0, 0.25, 1.0});
    apply_config_entry(c, "seeds", "5,6, 7");
    CHECK(c.seeds == std::vector<std::uint64_t>{5, 6, 7});
    apply_config_entry(c, "master_seed", "99");
    CHECK(c.master_seed == 99);
    apply_config_entry(c, "out_dir", "/tmp/somewhere");
    CHECK(c.out_dir == std::filesystem::path("/tmp/somewhere"));
}

TEST_CASE("config entries reject junk") {
    ExperimentConfig c;
    CHECK_THROWS_AS(apply_config_entry(c, "not_a_key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "alpha", "fast"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "episodes", "10.5"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "clusterer", "dbscan"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "strategies", "uniform,psychic"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "betas", "0.5,high"), ConfigError);
}

TEST_CASE("config files allow comments and blank lines") {
    const auto path = scratch_dir("config") / "sweep.cfg";
    std::ofstream(path) << "# gridworld sweep\n"
                           "env = gridworld\n"
                           "\n"
                           "grid_width = 5   # square-ish\n"
                           "grid_height=4\n"
                           "  seeds = 10, 20\n"
                           "betas=0.25\n";
    const auto c = load_config_file(path);
    CHECK(c.env == "gridworld");
    CHECK(c.grid_width == 5);
    CHECK(c.grid_height == 4);
    CHECK(c.seeds == std::vector<std::uint64_t>{10, 20});
    CHECK(c.betas == std::vector<double>{0.25});
    CHECK(c.alpha == 0.1); // untouched default
}

TEST_CASE("config files report the offending line") {
    const auto dir = scratch_dir("config_bad");
    SUBCASE("missing separator") {
        const auto path = dir / "bad.cfg";
        std::ofstream(path) << "env gridworld\n";
        CHECK_THROWS_WITH_AS(load_config_file(path), doctest::Contains(":1:"), ConfigError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_config_file(dir / "nope.cfg"), ConfigError);
    }
}

TEST_CASE("validate rejects inconsistent configurations") {
    auto base = tiny_config();
    CHECK_NOTHROW(validate(base));

    auto bad_env = base;
    bad_env.env = "atari";
    CHECK_THROWS_AS(validate(bad_env), ConfigError);

    auto no_strategies = base;
    no_strategies.strategies.clear();
    CHECK_THROWS_AS(validate(no_strategies), ConfigError);

    auto no_seeds = base;
    no_seeds.seeds.clear();
    CHECK_THROWS_AS(validate(no_seeds), ConfigError);

    auto no_betas = base;
    no_betas.betas.clear(); // but distribution_aware is in the default strategies
    CHECK_THROWS_AS(validate(no_betas), ConfigError);

    auto bad_beta = base;
    bad_beta.betas = {1.5};
    CHECK_THROWS_AS(validate(bad_beta), ConfigError);

    auto one_cluster = base;
    one_cluster.clusters = 1;
    CHECK_THROWS_AS(validate(one_cluster), ConfigError);

    auto thin_warmup = base;
    thin_warmup.clusterer = ClustererKind::KMeans;
    thin_warmup.cluster_warmup = thin_warmup.clusters - 1;
    CHECK_THROWS_AS(validate(thin_warmup), ConfigError);

    auto bad_fraction = base;
    bad_fraction.epsilon_fraction = 1.5;
    CHECK_THROWS_AS(validate(bad_fraction), ConfigError);
}

TEST_CASE("run ids name the variant and the seed") {
    CHECK(run_id_for(Strategy::Uniform, 1.0, 3) == "uniform_s3");
    CHECK(run_id_for(Strategy::EqualCluster, 0.0, 12) == "equal_cluster_s12");
    CHECK(run_id_for(Strategy::DistributionAware, 0.5, 7) == "distribution_aware_b0.5_s7");
    CHECK(run_id_for(Strategy::DistributionAware, 0.25, 1) == "distribution_aware_b0.25_s1");
}

TEST_CASE("stream seeds are deterministic and separate every grid cell") {
    const auto s = run_stream_seed(2024, Strategy::Uniform, 1.0, 1);
    CHECK(s == run_stream_seed(2024, Strategy::Uniform, 1.0, 1));

    std::set<std::uint64_t> seen;
    seen.insert(s);
    CHECK(seen.insert(run_stream_seed(2024, Strategy::Uniform, 1.0, 2)).second);
    CHECK(seen.insert(run_stream_seed(2024, Strategy::EqualCluster, 0.0, 1)).second);
    CHECK(seen.insert(run_stream_seed(2024, Strategy::DistributionAware, 1.0, 1)).second);
    CHECK(seen.insert(run_stream_seed(2024, Strategy::DistributionAware, 0.5, 1)).second);
    CHECK(seen.insert(run_stream_seed(2025, Strategy::Uniform, 1.0, 1)).second);
}

TEST_CASE("the sweep grid expands strategies, betas and seeds") {
    auto config = tiny_config();
    config.strategies = {Strategy::Uniform, Strategy::DistributionAware};
    config.betas = {0.25, 0.5};
    config.seeds = {1, 2};

    const auto runs = enumerate_runs(config);
    REQUIRE(runs.size() == 6); // uniform x 2 seeds + aware x 2 betas x 2 seeds

    CHECK(runs[0].run_id == "uniform_s1");
    CHECK(runs[0].beta == 1.0); // effective weight, not the sweep value
    CHECK(runs[1].run_id == "uniform_s2");
    CHECK(runs[2].run_id == "distribution_aware_b0.25_s1");
    CHECK(runs[2].beta == 0.25);
    CHECK(runs[3].run_id == "distribution_aware_b0.25_s2");
    CHECK(runs[4].run_id == "distribution_aware_b0.5_s1");
    CHECK(runs[5].run_id == "distribution_aware_b0.5_s2");

    std::set<std::string> ids;
    std::set<std::uint64_t> streams;
    for (const auto& r : runs) {
        ids.insert(r.run_id);
        streams.insert(r.stream_seed);
    }
    CHECK(ids.size() == runs.size());
    CHECK(streams.size() == runs.size());
}

TEST_CASE("equal_cluster grid cells carry an effective beta of zero") {
    auto config = tiny_config();
    config.strategies = {Strategy::EqualCluster};
    config.seeds = {4};
    const auto runs = enumerate_runs(config);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].beta == 0.0);
    CHECK(runs[0].run_id == "equal_cluster_s4");
}

TEST_CASE("make_env builds the configured environment") {
    auto config = tiny_config();
    config.env = "gridworld";
    config.grid_width = 4;
    config.grid_height = 3;
    const auto grid = make_env(config);
    CHECK(grid->spec().state_dim == 2);
    CHECK(grid->spec().action_count == 4);

    config.env = "chain";
    config.chain_states = 6;
    const auto chain = make_env(config);
    CHECK(chain->spec().state_dim == 1);
    CHECK(chain->spec().action_count == 2);
    CHECK(chain->spec().bounds[0].second == 5.0);

    config.env = "mountain_car";
    const auto car = make_env(config);
    CHECK(car->spec().state_dim == 2);
    CHECK(car->spec().action_count == 3);
}

TEST_CASE("the gridworld discretizer maps each cell to its own row") {
    auto config = tiny_config();
    config.grid_width = 4;
    config.grid_height = 3;
    const auto env = make_env(config);
    const auto disc = make_discretizer(config, *env);

    CHECK(disc.total_bins() == 12);
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 3; ++y) {
            const std::vector<double> state = {static_cast<double>(x), static_cast<double>(y)};
            CHECK(disc.flat_index(state) == static_cast<std::size_t>(x * 3 + y));
        }
    }
}

TEST_CASE("the chain discretizer is the identity on states") {
    auto config = tiny_config();
    config.env = "chain";
    config.chain_states = 6;
    const auto env = make_env(config);
    const auto disc = make_discretizer(config, *env);
    CHECK(disc.total_bins() == 6);
    for (int k = 0; k < 6; ++k) {
        const std::vector<double> state = {static_cast<double>(k)};
        CHECK(disc.flat_index(state) == static_cast<std::size_t>(k));
    }
}

TEST_CASE("continuous environments get the configured bin resolution") {
    auto config = tiny_config();
    config.env = "mountain_car";
    config.bins = 40;
    const auto env = make_env(config);
    const auto disc = make_discretizer(config, *env);
    CHECK(disc.dims() == 2);
    CHECK(disc.total_bins() == 1600);
}

TEST_CASE("execute_run produces one coherent row per episode") {
    auto config = tiny_config();
    const auto plan = enumerate_runs(config)[0];
    const auto rows = execute_run(config, plan);

    REQUIRE(rows.size() == config.episodes);
    std::vector<double> rewards;
    std::size_t last_wall = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].run_id == plan.run_id);
        CHECK(rows[i].strategy == "uniform");
        CHECK(rows[i].beta == 1.0);
        CHECK(rows[i].seed == plan.seed);
        CHECK(rows[i].episode == i + 1);
        CHECK(rows[i].wall_steps > last_wall);
        last_wall = rows[i].wall_steps;

        rewards.push_back(rows[i].total_reward);
        const std::size_t window = std::min<std::size_t>(100, rewards.size());
        double sum = 0.0;
        for (std::size_t j = rewards.size() - window; j < rewards.size(); ++j) {
            sum += rewards[j];
        }
        CHECK(rows[i].mean_reward_100 == sum / static_cast<double>(window));
    }
}

TEST_CASE("execute_run is a pure function of the plan") {
    auto config = tiny_config();
    const auto runs = enumerate_runs(config);
    const auto a = execute_run(config, runs[0]);
    const auto b = execute_run(config, runs[0]);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].total_reward == b[i].total_reward);
        CHECK(a[i].wall_steps == b[i].wall_steps);
    }

    // A different seed must change the trajectory.
    const auto other = execute_run(config, runs[1]);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        any_difference = any_difference || a[i].wall_steps != other[i].wall_steps;
    }
    CHECK(any_difference);
}

TEST_CASE("run_sweep writes one CSV per run plus the merged file") {
    auto config = tiny_config();
    config.out_dir = scratch_dir("sweep");
    const auto merged = run_sweep(config);

    const auto runs = enumerate_runs(config);
    REQUIRE(runs.size() == 4); // {uniform, distribution_aware(0.5)} x {1, 2}
    CHECK(merged.size() == runs.size() * config.episodes);

    std::vector<MetricsRow> concatenated;
    for (const auto& plan : runs) {
        const auto rows = read_metrics_csv(config.out_dir / ("run_" + plan.run_id + ".csv"));
        CHECK(rows.size() == config.episodes);
        concatenated.insert(concatenated.end(), rows.begin(), rows.end());
    }
    const auto merged_back = read_metrics_csv(config.out_dir / "metrics.csv");
    REQUIRE(merged_back.size() == concatenated.size());
    for (std::size_t i = 0; i < concatenated.size(); ++i) {
        CHECK(merged_back[i].run_id == concatenated[i].run_id);
        CHECK(merged_back[i].episode == concatenated[i].episode);
        CHECK(merged_back[i].total_reward == concatenated[i].total_reward);
        CHECK(merged_back[i].run_id == merged[i].run_id);
        CHECK(merged_back[i].total_reward == merged[i].total_reward);
    }
}

TEST_CASE("sweeps are byte-identical across reruns and thread counts") {
    auto config = tiny_config();
    config.out_dir = scratch_dir("sweep_a");
    run_sweep(config);
    const std::string once = slurp(config.out_dir / "metrics.csv");
    CHECK_FALSE(once.empty());

    run_sweep(config);
    CHECK(slurp(config.out_dir / "metrics.csv") == once);

    auto parallel = config;
    parallel.out_dir = scratch_dir("sweep_b");
    parallel.jobs = 3;
    run_sweep(parallel);
    CHECK(slurp(parallel.out_dir / "metrics.csv") == once);
}

TEST_CASE("cluster reports rank clusters by occupancy") {
    ClusterIndex index;
    for (std::size_t i = 0; i < 8; ++i) {
        index.insert(SlotId{i}, 5);
    }
    for (std::size_t i = 8; i < 10; ++i) {
        index.insert(SlotId{i}, 9);
    }

    const auto rows = cluster_report(index);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].code == 5);
    CHECK(rows[0].count == 8);
    CHECK(rows[0].share == 0.8);
    CHECK(rows[0].cumulative_share == 0.8);
    CHECK(rows[1].code == 9);
    CHECK(rows[1].count == 2);
    CHECK(rows[1].share == 0.2);
    CHECK(rows[1].cumulative_share == 1.0);

    std::size_t total = 0;
    for (const auto& r : rows) {
        total += r.count;
    }
    CHECK(total == index.total());

    const auto path = scratch_dir("report") / "clusters.csv";
    write_cluster_report_csv(path, rows);
    CHECK(slurp(path) == "cluster_code,count,share,cumulative_share\n"
                         "5,8,0.8,0.8\n"
                         "9,2,0.2,1\n");
}

TEST_CASE("ties in the cluster ranking break toward the smaller code") {
    ClusterIndex index;
    index.insert(SlotId{0}, 7);
    index.insert(SlotId{1}, 3);
    const auto rows = cluster_report(index);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].code == 3);
    CHECK(rows[1].code == 7);
}

TEST_CASE("top_share reads the cumulative share at the requested depth") {
    ClusterIndex index;
    for (std::size_t i = 0; i < 6; ++i) {
        index.insert(SlotId{i}, 1);
    }
    for (std::size_t i = 6; i < 9; ++i) {
        index.insert(SlotId{i}, 2);
    }
    index.insert(SlotId{9}, 3);
    const auto rows = cluster_report(index); // shares 0.6, 0.3, 0.1

    CHECK(top_share(rows, 0.2) == 0.6); // ceil(0.2 * 3) = 1 cluster
    CHECK(top_share(rows, 0.5) == 0.6 + 0.3); // ceil(0.5 * 3) = 2 clusters
    CHECK(top_share(rows, 1.0) == 1.0);
    CHECK(top_share({}, 0.2) == 0.0);
}

TEST_CASE("fill_random_policy keeps the index aligned with the buffer") {
    auto config = tiny_config();
    config.grid_width = 5;
    config.grid_height = 5;
    const auto env = make_env(config);

    SUBCASE("stationary clusterer under eviction") {
        ReplayBuffer buffer(200, env->spec().state_dim);
        ClusterIndex index;
        auto clusterer = make_clusterer(config, env->spec().state_dim, 42);
        Rng rng(42);
        fill_random_policy(*env, 700, buffer, *clusterer, index, rng);
        CHECK(buffer.len() == 200); // 700 inserts through a 200-slot ring
        CHECK(index.total() == buffer.len());
    }

    SUBCASE("k-means rebuild mid-stream") {
        config.clusterer = ClustererKind::KMeans;
        config.cluster_warmup = 100;
        ReplayBuffer buffer(500, env->spec().state_dim);
        ClusterIndex index;
        auto clusterer = make_clusterer(config, env->spec().state_dim, 43);
        Rng rng(43);
        fill_random_policy(*env, 300, buffer, *clusterer, index, rng);
        CHECK(buffer.len() == 300);
        CHECK(index.total() == 300);
        CHECK(index.nonempty_count() > 1); // the fitted model is in use
        std::size_t total = 0;
        for (const auto& row : cluster_report(index)) {
            total += row.count;
        }
        CHECK(total == 300);
    }
}
