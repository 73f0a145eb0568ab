#pragma once

// Episode metrics computed from event logs. All metrics use extrinsic rewards.

#include "ssd/gridworld.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssd::metrics {

struct EpisodeLog {
    grid::EnvKind env = grid::EnvKind::Coins;
    int num_agents = 0;
    int episode_length = 0; // T
    std::vector<grid::AgentType> types;
    grid::EventLog events;

    static EpisodeLog from_config(const grid::EnvConfig& config, grid::EventLog events);
};

struct Returns {
    std::vector<double> per_agent;
    double mean = 0.0;
};

Returns episode_returns(const EpisodeLog& log);

struct OwnCoins {
    std::vector<std::optional<double>> per_agent; // nullopt: agent collected nothing
    std::optional<double> mean;                   // over agents that collected something
};

OwnCoins proportion_own_coins(const EpisodeLog& log);

struct Sustainability {
    std::vector<double> per_agent; // t_i, or T when the agent never gained reward
    double mean = 0.0;
};

Sustainability sustainability(const EpisodeLog& log);

// N - (1/T) * number of (agent, step) pairs spent timed out.
double peace(const EpisodeLog& log);
// Same over the agents of one type, starting from the size of that group.
double peace(const EpisodeLog& log, grid::AgentType type);

struct Zaps {
    std::vector<int> per_agent;
    double mean = 0.0;
};

Zaps zap_counts(const EpisodeLog& log);

struct TypeMetrics {
    grid::AgentType type = grid::AgentType::Standard;
    int count = 0;
    double mean_return = 0.0;
    std::optional<double> own_coins;
    double sustainability = 0.0;
    std::optional<double> peace;
    double mean_zaps = 0.0;
};

struct EpisodeMetrics {
    Returns returns;
    std::optional<OwnCoins> own_coins;
    Sustainability sustainability;
    std::optional<double> peace;
    Zaps zaps;
    std::optional<double> average_age;
    std::optional<double> average_range;
    std::vector<TypeMetrics> per_type; // types in order of first appearance
};

EpisodeMetrics compute_metrics(const EpisodeLog& log, std::optional<double> average_age = std::nullopt,
                               std::optional<double> average_range = std::nullopt);

struct MetricRow {
    std::string scope; // agent | type | global
    std::string name;  // "<agent id>/<metric>", "<type>/<metric>" or "<metric>"
    double value = 0.0;

    bool operator==(const MetricRow&) const = default;
};

std::vector<MetricRow> metric_rows(const EpisodeMetrics& m);

// Mean per (scope, name) over several episodes; undefined entries simply do
// not contribute. Order follows first appearance.
std::vector<MetricRow> average_rows(const std::vector<std::vector<MetricRow>>& episodes);

} // namespace ssd::metrics
