#include "replaylab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "replaylab/chain_mdp.hpp"
#include "replaylab/errors.hpp"
#include "replaylab/gridworld.hpp"
#include "replaylab/mountain_car.hpp"

namespace replaylab {

const char* clusterer_name(ClustererKind kind) {
    switch (kind) {
    case ClustererKind::SimHash:
        return "simhash";
    case ClustererKind::KMeans:
        return "kmeans";
    }
    throw ConfigError("unknown clusterer kind");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, ',')) {
        part = trim(part);
        if (!part.empty()) {
            parts.push_back(part);
        }
    }
    return parts;
}

double to_double(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    }
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + s + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
    }
    return static_cast<int>(v);
}

} // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "env") {
        config.env = value;
    } else if (key == "grid_width") {
        config.grid_width = to_int(key, value);
    } else if (key == "grid_height") {
        config.grid_height = to_int(key, value);
    } else if (key == "chain_states") {
        config.chain_states = to_int(key, value);
    } else if (key == "max_steps") {
        config.max_steps = to_u64(key, value);
    } else if (key == "alpha") {
        config.alpha = to_double(key, value);
    } else if (key == "gamma") {
        config.gamma = to_double(key, value);
    } else if (key == "epsilon_start") {
        config.epsilon_start = to_double(key, value);
    } else if (key == "epsilon_end") {
        config.epsilon_end = to_double(key, value);
    } else if (key == "epsilon_fraction") {
        config.epsilon_fraction = to_double(key, value);
    } else if (key == "episodes") {
        config.episodes = to_u64(key, value);
    } else if (key == "target_sync_interval") {
        config.target_sync_interval = to_u64(key, value);
    } else if (key == "batch_size") {
        config.batch_size = to_u64(key, value);
    } else if (key == "warmup_transitions") {
        config.warmup_transitions = to_u64(key, value);
    } else if (key == "bins") {
        config.bins = to_u64(key, value);
    } else if (key == "buffer_size") {
        config.buffer_size = to_u64(key, value);
    } else if (key == "clusterer") {
        if (value == "simhash") {
            config.clusterer = ClustererKind::SimHash;
        } else if (value == "kmeans") {
            config.clusterer = ClustererKind::KMeans;
        } else {
            throw ConfigError("key 'clusterer': expected simhash or kmeans, got '" + value + "'");
        }
    } else if (key == "clusters") {
        config.clusters = to_u64(key, value);
    } else if (key == "cluster_warmup") {
        config.cluster_warmup = to_u64(key, value);
    } else if (key == "strategies") {
        config.strategies.clear();
        for (const auto& name : split_list(value)) {
            const auto s = parse_strategy(name);
            if (!s) {
                throw ConfigError("key 'strategies': unknown strategy '" + name + "'");
            }
            config.strategies.push_back(*s);
        }
    } else if (key == "betas") {
        config.betas.clear();
        for (const auto& b : split_list(value)) {
            config.betas.push_back(to_double(key, b));
        }
    } else if (key == "seeds") {
        config.seeds.clear();
        for (const auto& s : split_list(value)) {
            config.seeds.push_back(to_u64(key, s));
        }
    } else if (key == "master_seed") {
        config.master_seed = to_u64(key, value);
    } else if (key == "out_dir") {
        config.out_dir = value;
    } else if (key == "jobs") {
        config.jobs = to_u64(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
        }
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void validate(const ExperimentConfig& config) {
    if (config.env != "gridworld" && config.env != "chain" && config.env != "mountain_car") {
        throw ConfigError("unknown env '" + config.env + "'");
    }
    if (config.strategies.empty()) {
        throw ConfigError("at least one strategy is required");
    }
    if (config.seeds.empty()) {
        throw ConfigError("at least one seed is required");
    }
    const bool wants_beta = std::find(config.strategies.begin(), config.strategies.end(),
                                      Strategy::DistributionAware) != config.strategies.end();
    if (wants_beta && config.betas.empty()) {
        throw ConfigError("distribution_aware runs need at least one beta");
    }
    for (const double beta : config.betas) {
        validate(SamplerConfig{Strategy::DistributionAware, beta});
    }
    if (config.buffer_size == 0 || config.episodes == 0 || config.batch_size == 0) {
        throw ConfigError("buffer_size, episodes and batch_size must be positive");
    }
    if (config.clusters < 2) {
        throw ConfigError("clusters must be at least 2");
    }
    if (config.clusterer == ClustererKind::KMeans && config.cluster_warmup < config.clusters) {
        throw ConfigError("cluster_warmup must be at least the cluster count");
    }
    if (config.bins == 0) {
        throw ConfigError("bins must be positive");
    }
    if (!(config.epsilon_fraction >= 0.0 && config.epsilon_fraction <= 1.0)) {
        throw ConfigError("epsilon_fraction must be in [0, 1]");
    }
}

std::string run_id_for(Strategy strategy, double beta, std::uint64_t seed) {
    std::string id = strategy_name(strategy);
    if (strategy == Strategy::DistributionAware) {
        id += "_b" + format_double(beta);
    }
    id += "_s" + std::to_string(seed);
    return id;
}

std::uint64_t run_stream_seed(std::uint64_t master_seed, Strategy strategy, double beta,
                              std::uint64_t seed) {
    std::uint64_t s = mix_seed(master_seed, fnv1a(strategy_name(strategy)));
    s = mix_seed(s, std::bit_cast<std::uint64_t>(beta));
    return mix_seed(s, seed);
}

std::vector<RunPlan> enumerate_runs(const ExperimentConfig& config) {
    validate(config);
    std::vector<RunPlan> plans;
    for (const Strategy strategy : config.strategies) {
        // Uniform and equal_cluster are the beta = 1 / beta = 0 endpoints;
        // only distribution_aware spans the configured beta grid.
        std::vector<double> betas{effective_beta(SamplerConfig{strategy, 1.0})};
        if (strategy == Strategy::DistributionAware) {
            betas = config.betas;
        }
        for (const double beta : betas) {
            for (const std::uint64_t seed : config.seeds) {
                RunPlan plan;
                plan.strategy = strategy;
                plan.beta = beta;
                plan.seed = seed;
                plan.run_id = run_id_for(strategy, beta, seed);
                plan.stream_seed = run_stream_seed(config.master_seed, strategy, beta, seed);
                plans.push_back(std::move(plan));
            }
        }
    }
    return plans;
}

std::unique_ptr<Env> make_env(const ExperimentConfig& config) {
    if (config.env == "gridworld") {
        Gridworld::Config g;
        g.width = config.grid_width;
        g.height = config.grid_height;
        if (config.max_steps > 0) {
            g.max_steps = static_cast<int>(config.max_steps);
        }
        return std::make_unique<Gridworld>(g);
    }
    if (config.env == "chain") {
        ChainMdp::Config c;
        c.n_states = config.chain_states;
        if (config.max_steps > 0) {
            c.max_steps = static_cast<int>(config.max_steps);
        }
        return std::make_unique<ChainMdp>(c);
    }
    if (config.env == "mountain_car") {
        return std::make_unique<MountainCar>(
            config.max_steps > 0 ? static_cast<int>(config.max_steps) : 200);
    }
    throw ConfigError("unknown env '" + config.env + "'");
}

Discretizer make_discretizer(const ExperimentConfig& config, const Env& env) {
    const EnvSpec& spec = env.spec();
    std::vector<std::size_t> bins;
    if (config.env == "gridworld") {
        bins = {static_cast<std::size_t>(config.grid_width),
                static_cast<std::size_t>(config.grid_height)};
    } else if (config.env == "chain") {
        bins = {static_cast<std::size_t>(config.chain_states)};
    } else {
        bins.assign(spec.state_dim, config.bins);
    }
    return Discretizer::uniform(spec.bounds, bins);
}

std::unique_ptr<Clusterer> make_clusterer(const ExperimentConfig& config, std::size_t state_dim,
                                          std::uint64_t stream_seed) {
    const std::uint64_t seed = mix_seed(stream_seed, 0x636c7573ull);
    if (config.clusterer == ClustererKind::SimHash) {
        return std::make_unique<SimHashClusterer>(state_dim, config.clusters, seed);
    }
    return std::make_unique<KMeansClusterer>(state_dim, config.clusters, config.cluster_warmup,
                                             seed);
}

std::vector<MetricsRow> execute_run(const ExperimentConfig& config, const RunPlan& plan) {
    const auto env = make_env(config);
    const EnvSpec& spec = env->spec();

    TabularQ q(make_discretizer(config, *env), spec.action_count);
    ReplayBuffer buffer(config.buffer_size, spec.state_dim);
    const auto clusterer = make_clusterer(config, spec.state_dim, plan.stream_seed);

    TrainConfig tc;
    tc.alpha = config.alpha;
    tc.gamma = config.gamma;
    const std::size_t cap =
        config.max_steps > 0 ? config.max_steps : static_cast<std::size_t>(spec.max_steps);
    tc.epsilon = EpsilonSchedule{
        config.epsilon_start, config.epsilon_end,
        static_cast<std::size_t>(std::llround(config.epsilon_fraction *
                                              static_cast<double>(config.episodes * cap)))};
    tc.episodes = config.episodes;
    tc.max_steps = config.max_steps;
    tc.target_sync_interval = config.target_sync_interval;
    tc.batch_size = config.batch_size;
    tc.warmup_transitions = config.warmup_transitions;
    tc.sampler = SamplerConfig{plan.strategy, plan.beta};
    tc.seed = plan.stream_seed;

    const auto stats = train(*env, tc, *clusterer, buffer, q);

    std::vector<MetricsRow> rows;
    rows.reserve(stats.size());
    std::size_t wall_steps = 0;
    for (const auto& s : stats) {
        wall_steps += s.steps;
        MetricsRow row;
        row.run_id = plan.run_id;
        row.strategy = strategy_name(plan.strategy);
        row.beta = plan.beta;
        row.seed = plan.seed;
        row.episode = s.episode;
        row.total_reward = s.total_reward;
        row.mean_reward_100 = s.mean_reward_100;
        row.wall_steps = wall_steps;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<MetricsRow> run_sweep(const ExperimentConfig& config) {
    const auto plans = enumerate_runs(config);
    std::filesystem::create_directories(config.out_dir);

    std::vector<std::vector<MetricsRow>> per_run(plans.size());
    const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, plans.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < plans.size(); ++i) {
            per_run[i] = execute_run(config, plans[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < plans.size(); i = next.fetch_add(1)) {
                    try {
                        per_run[i] = execute_run(config, plans[i]);
                    } catch (...) {
                        const std::scoped_lock lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<MetricsRow> merged;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        write_metrics_csv(config.out_dir / ("run_" + plans[i].run_id + ".csv"), per_run[i]);
        merged.insert(merged.end(), per_run[i].begin(), per_run[i].end());
    }
    write_metrics_csv(config.out_dir / "metrics.csv", merged);
    return merged;
}

std::vector<ClusterReportRow> cluster_report(const ClusterIndex& index) {
    auto clusters = index.nonempty_clusters();
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    const double total = static_cast<double>(index.total());
    std::vector<ClusterReportRow> rows;
    rows.reserve(clusters.size());
    double cumulative = 0.0;
    for (const auto& [code, count] : clusters) {
        ClusterReportRow row;
        row.code = code;
        row.count = count;
        row.share = static_cast<double>(count) / total;
        cumulative += row.share;
        row.cumulative_share = cumulative;
        rows.push_back(row);
    }
    if (!rows.empty()) {
        rows.back().cumulative_share = 1.0; // pin against float accumulation
    }
    return rows;
}

void write_cluster_report_csv(const std::filesystem::path& path,
                              const std::vector<ClusterReportRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write cluster report: " + path.string());
    }
    out << "cluster_code,count,share,cumulative_share\n";
    for (const auto& r : rows) {
        out << r.code << ',' << r.count << ',' << format_double(r.share) << ','
            << format_double(r.cumulative_share) << '\n';
    }
}

double top_share(const std::vector<ClusterReportRow>& rows, double fraction) {
    if (rows.empty()) {
        return 0.0;
    }
    const auto top = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(rows.size())));
    if (top == 0) {
        return 0.0;
    }
    return rows[std::min(top, rows.size()) - 1].cumulative_share;
}

void fill_random_policy(Env& env, std::size_t steps, ReplayBuffer& buffer, Clusterer& clusterer,
                        ClusterIndex& index, Rng& rng) {
    const int actions = env.spec().action_count;
    std::vector<double> state = env.reset(rng);
    for (std::size_t t = 0; t < steps; ++t) {
        const int action = static_cast<int>(rng.below(static_cast<std::uint64_t>(actions)));
        StepResult step = env.step(action);

        Transition tr{state, action, step.reward, step.next_state, step.done};
        const auto inserted = buffer.insert(std::move(tr));
        if (inserted.evicted.has_value()) {
            const SlotId gone = inserted.evicted->slot;
            index.remove(gone, index.cluster_of(gone));
        }
        const ClusterCode code = clusterer.observe(state);
        if (clusterer.take_rebuild_flag()) {
            index.clear();
            for (std::size_t i = 0; i < buffer.len(); ++i) {
                index.insert(SlotId{i}, clusterer.assign(buffer.get(SlotId{i}).state));
            }
        } else {
            index.insert(inserted.slot, code);
        }

        if (step.done) {
            state = env.reset(rng);
        } else {
            state = std::move(step.next_state);
        }
    }
}

} // namespace replaylab
