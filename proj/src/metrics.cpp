#include "replaylab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "replaylab/errors.hpp"

namespace replaylab {

std::string format_double(double value) {
    char buf[40];
    // Integral values print as plain integers ("100", not "1e+02").
    if (std::nearbyint(value) == value && std::abs(value) < 9007199254740992.0) {
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    // Shortest precision that round-trips keeps the files tidy and stable.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

std::string VariantKey::label() const {
    if (strategy == "distribution_aware") {
        return strategy + "(beta=" + format_double(beta) + ")";
    }
    return strategy;
}

namespace {

std::string row_to_csv(const MetricsRow& r) {
    std::ostringstream out;
    out << r.run_id << ',' << r.strategy << ',' << format_double(r.beta) << ',' << r.seed << ','
        << r.episode << ',' << format_double(r.total_reward) << ','
        << format_double(r.mean_reward_100) << ',' << r.wall_steps;
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ConfigError(std::string("bad ") + what + " value: '" + s + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ConfigError(std::string("bad ") + what + " value: '" + s + "'");
    }
    return v;
}

} // namespace

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out(path, std::ios::binary); // binary: no platform newline translation
    if (!out) {
        throw std::runtime_error("cannot write metrics file: " + path.string());
    }
    out << kMetricsHeader << '\n';
    for (const auto& r : rows) {
        out << row_to_csv(r) << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed writing metrics file: " + path.string());
    }
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open metrics file: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
        throw ConfigError("metrics file has an unexpected header: " + path.string());
    }
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 8) {
            throw ConfigError("metrics row has " + std::to_string(f.size()) + " fields: " + line);
        }
        MetricsRow r;
        r.run_id = f[0];
        r.strategy = f[1];
        r.beta = parse_double(f[2], "beta");
        r.seed = parse_u64(f[3], "seed");
        r.episode = parse_u64(f[4], "episode");
        r.total_reward = parse_double(f[5], "total_reward");
        r.mean_reward_100 = parse_double(f[6], "mean_reward_100");
        r.wall_steps = parse_u64(f[7], "wall_steps");
        rows.push_back(std::move(r));
    }
    return rows;
}

CompareResult compare_metrics(const std::vector<MetricsRow>& rows) {
    if (rows.empty()) {
        throw ConfigError("no metrics rows to compare");
    }

    struct RunData {
        VariantKey variant;
        std::uint64_t seed = 0;
        std::vector<double> total_rewards;
        std::vector<double> mean_100;
    };
    // Keyed by run_id; std::map keeps the output order deterministic.
    std::map<std::string, RunData> runs;
    for (const auto& r : rows) {
        auto& run = runs[r.run_id];
        run.variant = VariantKey{r.strategy, r.beta};
        run.seed = r.seed;
        run.total_rewards.push_back(r.total_reward);
        run.mean_100.push_back(r.mean_reward_100);
    }

    const std::size_t episodes = runs.begin()->second.total_rewards.size();
    for (const auto& [id, run] : runs) {
        if (run.total_rewards.size() != episodes) {
            throw AlignmentError("run " + id + " has " + std::to_string(run.total_rewards.size()) +
                                 " episodes, expected " + std::to_string(episodes));
        }
    }

    struct VariantData {
        std::vector<double> final100;
        std::vector<double> auc;
        std::map<std::uint64_t, double> auc_by_seed;
    };
    std::vector<VariantKey> order;
    std::map<std::string, VariantData> variants; // keyed by label for determinism
    for (const auto& [id, run] : runs) {
        const std::size_t window = std::min<std::size_t>(100, episodes);
        double final_sum = 0.0;
        for (std::size_t i = episodes - window; i < episodes; ++i) {
            final_sum += run.total_rewards[i];
        }
        double auc = 0.0;
        for (const double v : run.mean_100) {
            auc += v;
        }
        const std::string label = run.variant.label();
        if (!variants.contains(label)) {
            order.push_back(run.variant);
        }
        auto& v = variants[label];
        v.final100.push_back(final_sum / static_cast<double>(window));
        v.auc.push_back(auc);
        v.auc_by_seed[run.seed] = auc;
    }
    std::sort(order.begin(), order.end(),
              [](const VariantKey& a, const VariantKey& b) { return a.label() < b.label(); });

    CompareResult result;
    for (const auto& key : order) {
        const auto& v = variants.at(key.label());
        VariantSummary s;
        s.variant = key;
        s.runs = v.final100.size();
        for (const double x : v.final100) {
            s.final100_mean += x;
        }
        s.final100_mean /= static_cast<double>(s.runs);
        double var = 0.0;
        for (const double x : v.final100) {
            var += (x - s.final100_mean) * (x - s.final100_mean);
        }
        s.final100_sd = std::sqrt(var / static_cast<double>(s.runs));
        for (const double x : v.auc) {
            s.auc_mean += x;
        }
        s.auc_mean /= static_cast<double>(s.runs);
        result.summaries.push_back(std::move(s));
    }

    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& va = variants.at(order[i].label());
            const auto& vb = variants.at(order[j].label());
            PairwiseWins w;
            w.a = order[i];
            w.b = order[j];
            for (const auto& [seed, auc_a] : va.auc_by_seed) {
                const auto it = vb.auc_by_seed.find(seed);
                if (it == vb.auc_by_seed.end()) {
                    continue;
                }
                if (auc_a > it->second) {
                    ++w.wins_a;
                } else if (auc_a < it->second) {
                    ++w.wins_b;
                } else {
                    ++w.ties;
                }
            }
            result.pairwise.push_back(std::move(w));
        }
    }
    return result;
}

void write_summary_csv(const std::filesystem::path& path, const CompareResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write summary file: " + path.string());
    }
    out << "strategy,beta,runs,final100_mean,final100_sd,auc_mean\n";
    for (const auto& s : result.summaries) {
        out << s.variant.strategy << ',' << format_double(s.variant.beta) << ',' << s.runs << ','
            << format_double(s.final100_mean) << ',' << format_double(s.final100_sd) << ','
            << format_double(s.auc_mean) << '\n';
    }
    out << "\npair_a,pair_b,wins_a,wins_b,ties\n";
    for (const auto& w : result.pairwise) {
        out << w.a.label() << ',' << w.b.label() << ',' << w.wins_a << ',' << w.wins_b << ','
            << w.ties << '\n';
    }
}

std::string render_summary_table(const CompareResult& result) {
    std::ostringstream out;
    out << "variant                              runs  final100 (mean +- sd)   mean AUC\n";
    for (const auto& s : result.summaries) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-36s %4zu  %10.3f +- %-8.3f %12.1f\n",
                      s.variant.label().c_str(), s.runs, s.final100_mean, s.final100_sd, s.auc_mean);
        out << line;
    }
    if (!result.pairwise.empty()) {
        out << "\npaired per-seed AUC wins:\n";
        for (const auto& w : result.pairwise) {
            out << "  " << w.a.label() << " vs " << w.b.label() << ": " << w.wins_a << "-"
                << w.wins_b;
            if (w.ties > 0) {
                out << " (" << w.ties << " ties)";
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace replaylab
