#include "ssd/metrics.hpp"

#include "ssd/error.hpp"

#include <algorithm>
#include <map>

namespace ssd::metrics {

namespace {

using grid::EventKind;

bool is_reward(EventKind k)
{
    return k == EventKind::CoinOwn || k == EventKind::CoinMismatch || k == EventKind::Penalty ||
           k == EventKind::Apple;
}

void check_agent(const EpisodeLog& log, int agent)
{
    if (agent < 0 || agent >= log.num_agents) {
        throw ValidationError("event refers to unknown agent " + std::to_string(agent));
    }
}

double mean_of(const std::vector<double>& v)
{
    if (v.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

} // namespace

EpisodeLog EpisodeLog::from_config(const grid::EnvConfig& config, grid::EventLog events)
{
    EpisodeLog log;
    log.env = config.env;
    log.num_agents = config.num_agents();
    log.episode_length = config.episode_length;
    for (const auto& a : config.agents) {
        log.types.push_back(a.type);
    }
    log.events = std::move(events);
    return log;
}

Returns episode_returns(const EpisodeLog& log)
{
    Returns r;
    r.per_agent.assign(static_cast<std::size_t>(log.num_agents), 0.0);
    for (const auto& e : log.events) {
        if (is_reward(e.kind)) {
            check_agent(log, e.agent);
            r.per_agent[static_cast<std::size_t>(e.agent)] += e.value;
        }
    }
    r.mean = mean_of(r.per_agent);
    return r;
}

OwnCoins proportion_own_coins(const EpisodeLog& log)
{
    if (log.env != grid::EnvKind::Coins) {
        throw ValidationError("proportion of own coins is only defined for Coins logs");
    }
    std::vector<int> own(static_cast<std::size_t>(log.num_agents), 0);
    std::vector<int> total(static_cast<std::size_t>(log.num_agents), 0);
    for (const auto& e : log.events) {
        if (e.kind == EventKind::CoinOwn || e.kind == EventKind::CoinMismatch) {
            check_agent(log, e.agent);
            ++total[static_cast<std::size_t>(e.agent)];
            if (e.kind == EventKind::CoinOwn) {
                ++own[static_cast<std::size_t>(e.agent)];
            }
        }
    }
    OwnCoins out;
    std::vector<double> defined;
    for (std::size_t i = 0; i < own.size(); ++i) {
        if (total[i] == 0) {
            out.per_agent.emplace_back();
        } else {
            double p = static_cast<double>(own[i]) / static_cast<double>(total[i]);
            out.per_agent.emplace_back(p);
            defined.push_back(p);
        }
    }
    if (!defined.empty()) {
        out.mean = mean_of(defined);
    }
    return out;
}

Sustainability sustainability(const EpisodeLog& log)
{
    // net reward per (agent, step)
    std::vector<std::map<int, double>> net(static_cast<std::size_t>(log.num_agents));
    for (const auto& e : log.events) {
        if (is_reward(e.kind)) {
            check_agent(log, e.agent);
            net[static_cast<std::size_t>(e.agent)][e.t] += e.value;
        }
    }
    Sustainability s;
    for (const auto& steps : net) {
        double sum = 0.0;
        int count = 0;
        for (const auto& [t, r] : steps) {
            if (r > 0.0) {
                sum += t;
                ++count;
            }
        }
        s.per_agent.push_back(count == 0 ? static_cast<double>(log.episode_length) : sum / count);
    }
    s.mean = mean_of(s.per_agent);
    return s;
}

namespace {

double peace_over(const EpisodeLog& log, const std::vector<bool>& members)
{
    if (log.env != grid::EnvKind::Harvest) {
        throw ValidationError("peace is only defined for Harvest logs");
    }
    if (log.episode_length <= 0) {
        throw ValidationError("peace needs a positive episode length");
    }
    long long timed_out = 0;
    for (const auto& e : log.events) {
        if (e.kind == EventKind::Timeout) {
            check_agent(log, e.agent);
            if (members[static_cast<std::size_t>(e.agent)]) {
                ++timed_out;
            }
        }
    }
    int size = 0;
    for (bool m : members) {
        size += m ? 1 : 0;
    }
    return size - static_cast<double>(timed_out) / log.episode_length;
}

} // namespace

double peace(const EpisodeLog& log)
{
    return peace_over(log, std::vector<bool>(static_cast<std::size_t>(log.num_agents), true));
}

double peace(const EpisodeLog& log, grid::AgentType type)
{
    std::vector<bool> members;
    for (int i = 0; i < log.num_agents; ++i) {
        members.push_back(log.types.at(static_cast<std::size_t>(i)) == type);
    }
    return peace_over(log, members);
}

Zaps zap_counts(const EpisodeLog& log)
{
    Zaps z;
    z.per_agent.assign(static_cast<std::size_t>(log.num_agents), 0);
    for (const auto& e : log.events) {
        if (e.kind == EventKind::Zap) {
            check_agent(log, e.agent);
            ++z.per_agent[static_cast<std::size_t>(e.agent)];
        }
    }
    double sum = 0.0;
    for (int c : z.per_agent) {
        sum += c;
    }
    z.mean = log.num_agents > 0 ? sum / log.num_agents : 0.0;
    return z;
}

EpisodeMetrics compute_metrics(const EpisodeLog& log, std::optional<double> average_age,
                               std::optional<double> average_range)
{
    if (static_cast<int>(log.types.size()) != log.num_agents) {
        throw ValidationError("episode log needs one type per agent");
    }
    EpisodeMetrics m;
    m.returns = episode_returns(log);
    if (log.env == grid::EnvKind::Coins) {
        m.own_coins = proportion_own_coins(log);
    } else {
        m.peace = peace(log);
    }
    m.sustainability = sustainability(log);
    m.zaps = zap_counts(log);
    m.average_age = average_age;
    m.average_range = average_range;

    std::vector<grid::AgentType> order;
    for (auto t : log.types) {
        if (std::find(order.begin(), order.end(), t) == order.end()) {
            order.push_back(t);
        }
    }
    for (auto type : order) {
        TypeMetrics tm;
        tm.type = type;
        std::vector<double> ret, sus, zaps, own;
        for (int i = 0; i < log.num_agents; ++i) {
            if (log.types[static_cast<std::size_t>(i)] != type) {
                continue;
            }
            auto idx = static_cast<std::size_t>(i);
            ++tm.count;
            ret.push_back(m.returns.per_agent[idx]);
            sus.push_back(m.sustainability.per_agent[idx]);
            zaps.push_back(m.zaps.per_agent[idx]);
            if (m.own_coins && m.own_coins->per_agent[idx]) {
                own.push_back(*m.own_coins->per_agent[idx]);
            }
        }
        tm.mean_return = mean_of(ret);
        tm.sustainability = mean_of(sus);
        tm.mean_zaps = mean_of(zaps);
        if (!own.empty()) {
            tm.own_coins = mean_of(own);
        }
        if (log.env == grid::EnvKind::Harvest) {
            tm.peace = peace(log, type);
        }
        m.per_type.push_back(tm);
    }
    return m;
}

std::vector<MetricRow> metric_rows(const EpisodeMetrics& m)
{
    std::vector<MetricRow> rows;
    rows.push_back({"global", "return", m.returns.mean});
    if (m.own_coins && m.own_coins->mean) {
        rows.push_back({"global", "own_coins", *m.own_coins->mean});
    }
    rows.push_back({"global", "sustainability", m.sustainability.mean});
    if (m.peace) {
        rows.push_back({"global", "peace", *m.peace});
    }
    rows.push_back({"global", "zaps", m.zaps.mean});
    if (m.average_age) {
        rows.push_back({"global", "average_age", *m.average_age});
    }
    if (m.average_range) {
        rows.push_back({"global", "average_range", *m.average_range});
    }
    for (const auto& t : m.per_type) {
        const std::string p = std::string(grid::to_string(t.type)) + "/";
        rows.push_back({"type", p + "return", t.mean_return});
        if (t.own_coins) {
            rows.push_back({"type", p + "own_coins", *t.own_coins});
        }
        rows.push_back({"type", p + "sustainability", t.sustainability});
        if (t.peace) {
            rows.push_back({"type", p + "peace", *t.peace});
        }
        rows.push_back({"type", p + "zaps", t.mean_zaps});
    }
    for (std::size_t i = 0; i < m.returns.per_agent.size(); ++i) {
        const std::string p = std::to_string(i) + "/";
        rows.push_back({"agent", p + "return", m.returns.per_agent[i]});
        if (m.own_coins && m.own_coins->per_agent[i]) {
            rows.push_back({"agent", p + "own_coins", *m.own_coins->per_agent[i]});
        }
        rows.push_back({"agent", p + "sustainability", m.sustainability.per_agent[i]});
        rows.push_back({"agent", p + "zaps", static_cast<double>(m.zaps.per_agent[i])});
    }
    return rows;
}

std::vector<MetricRow> average_rows(const std::vector<std::vector<MetricRow>>& episodes)
{
    std::vector<MetricRow> order;
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    for (const auto& rows : episodes) {
        for (const auto& r : rows) {
            auto key = std::make_pair(r.scope, r.name);
            auto it = acc.find(key);
            if (it == acc.end()) {
                acc[key] = {r.value, 1};
                order.push_back({r.scope, r.name, 0.0});
            } else {
                it->second.first += r.value;
                ++it->second.second;
            }
        }
    }
    for (auto& r : order) {
        const auto& [sum, count] = acc[{r.scope, r.name}];
        r.value = sum / count;
    }
    return order;
}

} // namespace ssd::metrics
