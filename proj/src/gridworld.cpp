#include "replaylab/gridworld.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "replaylab/errors.hpp"

namespace replaylab {

namespace {
constexpr int kDx[4] = {0, 0, -1, 1};
constexpr int kDy[4] = {-1, 1, 0, 0};
} // namespace

Gridworld::Gridworld(Config config) : config_(std::move(config)) {
    auto& c = config_;
    if (c.width < 1 || c.height < 1 || (c.width == 1 && c.height == 1)) {
        throw ConfigError("gridworld needs at least two cells");
    }
    if (c.goal == std::pair<int, int>{-1, -1}) {
        c.goal = {c.width - 1, c.height - 1};
    }
    if (c.max_steps <= 0) {
        c.max_steps = 2 * (c.width + c.height);
    }
    auto inside = [&](std::pair<int, int> p) {
        return p.first >= 0 && p.first < c.width && p.second >= 0 && p.second < c.height;
    };
    if (!inside(c.start) || !inside(c.goal)) {
        throw ConfigError("gridworld start/goal outside the grid");
    }
    if (c.start == c.goal) {
        throw ConfigError("gridworld start must differ from goal");
    }
    if (c.walls.contains(c.start) || c.walls.contains(c.goal)) {
        throw ConfigError("gridworld start/goal may not be walls");
    }
    for (const auto& w : c.walls) {
        if (!inside(w)) {
            throw ConfigError("gridworld wall outside the grid");
        }
    }

    spec_.state_dim = 2;
    spec_.action_count = 4;
    spec_.bounds = {{0.0, static_cast<double>(c.width - 1)}, {0.0, static_cast<double>(c.height - 1)}};
    spec_.max_steps = c.max_steps;
}

Gridworld Gridworld::from_map(const std::string& text, double step_reward, double goal_reward,
                              int max_steps) {
    Config config;
    config.step_reward = step_reward;
    config.goal_reward = goal_reward;
    config.max_steps = max_steps;
    config.goal = {-2, -2};
    std::pair<int, int> start{-2, -2};

    std::istringstream in(text);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        rows.push_back(line);
    }
    if (rows.empty()) {
        throw ConfigError("grid map is empty");
    }
    config.height = static_cast<int>(rows.size());
    config.width = static_cast<int>(rows.front().size());
    for (int y = 0; y < config.height; ++y) {
        if (static_cast<int>(rows[y].size()) != config.width) {
            throw ConfigError("grid map rows have different lengths");
        }
        for (int x = 0; x < config.width; ++x) {
            switch (rows[y][x]) {
            case '#':
                config.walls.insert({x, y});
                break;
            case 'S':
                if (start.first != -2) {
                    throw ConfigError("grid map has more than one start");
                }
                start = {x, y};
                break;
            case 'G':
                if (config.goal.first != -2) {
                    throw ConfigError("grid map has more than one goal");
                }
                config.goal = {x, y};
                break;
            case '.':
                break;
            default:
                throw ConfigError(std::string("grid map has invalid character '") + rows[y][x] + "'");
            }
        }
    }
    if (start.first == -2 || config.goal.first == -2) {
        throw ConfigError("grid map needs exactly one S and one G");
    }
    config.start = start;
    return Gridworld(std::move(config));
}

Gridworld Gridworld::from_map_file(const std::filesystem::path& path, double step_reward,
                                   double goal_reward, int max_steps) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open grid map file: " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return from_map(text.str(), step_reward, goal_reward, max_steps);
}

std::vector<double> Gridworld::reset(Rng&) {
    x_ = config_.start.first;
    y_ = config_.start.second;
    steps_ = 0;
    done_ = false;
    return {static_cast<double>(x_), static_cast<double>(y_)};
}

bool Gridworld::blocked(int x, int y) const {
    if (x < 0 || x >= config_.width || y < 0 || y >= config_.height) {
        return true;
    }
    return config_.walls.contains({x, y});
}

StepResult Gridworld::step(int action) {
    if (done_) {
        throw std::logic_error("step() on a finished episode");
    }
    if (action < 0 || action >= spec_.action_count) {
        throw RejectedInput("gridworld action out of range");
    }
    const int nx = x_ + kDx[action];
    const int ny = y_ + kDy[action];
    if (!blocked(nx, ny)) {
        x_ = nx;
        y_ = ny;
    }
    ++steps_;

    StepResult result;
    result.next_state = {static_cast<double>(x_), static_cast<double>(y_)};
    const bool at_goal = std::pair<int, int>{x_, y_} == config_.goal;
    result.reward = config_.step_reward + (at_goal ? config_.goal_reward : 0.0);
    result.done = at_goal || steps_ >= config_.max_steps;
    done_ = result.done;
    return result;
}

std::size_t Gridworld::cell_index(int x, int y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(config_.height) +
           static_cast<std::size_t>(y);
}

FiniteMdp Gridworld::finite_model() const {
    FiniteMdp mdp;
    mdp.n_states = static_cast<std::size_t>(config_.width) * static_cast<std::size_t>(config_.height);
    mdp.n_actions = 4;
    mdp.next.resize(mdp.n_states * 4);
    mdp.reward.resize(mdp.n_states * 4);
    mdp.terminal.assign(mdp.n_states, false);
    mdp.start = cell_index(config_.start.first, config_.start.second);
    mdp.terminal[cell_index(config_.goal.first, config_.goal.second)] = true;

    for (int x = 0; x < config_.width; ++x) {
        for (int y = 0; y < config_.height; ++y) {
            const std::size_t s = cell_index(x, y);
            const bool in_wall = config_.walls.contains({x, y});
            for (int a = 0; a < 4; ++a) {
                int nx = x + kDx[a];
                int ny = y + kDy[a];
                if (in_wall || blocked(nx, ny)) {
                    nx = x;
                    ny = y;
                }
                const std::size_t t = cell_index(nx, ny);
                mdp.next[mdp.idx(s, a)] = t;
                const bool at_goal = std::pair<int, int>{nx, ny} == config_.goal;
                mdp.reward[mdp.idx(s, a)] = config_.step_reward + (at_goal ? config_.goal_reward : 0.0);
            }
        }
    }
    return mdp;
}

} // namespace replaylab
