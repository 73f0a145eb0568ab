#include "ssd/estimates.hpp"

#include "ssd/error.hpp"
#include "ssd/ini.hpp"

#include <sstream>

namespace ssd::estimates {

EstimateTable EstimateTable::initial(int owner, int num_agents)
{
    EstimateTable t;
    t.owner = owner;
    t.estimate.assign(static_cast<std::size_t>(num_agents), kInitialEstimate);
    t.tau.assign(static_cast<std::size_t>(num_agents), 0);
    return t;
}

std::vector<double> EstimateTable::others() const
{
    std::vector<double> out;
    out.reserve(estimate.size());
    for (std::size_t j = 0; j < estimate.size(); ++j) {
        if (static_cast<int>(j) != owner) {
            out.push_back(estimate[j]);
        }
    }
    return out;
}

std::vector<EstimateTable> initial_tables(int num_agents)
{
    std::vector<EstimateTable> tables;
    for (int i = 0; i < num_agents; ++i) {
        tables.push_back(EstimateTable::initial(i, num_agents));
    }
    return tables;
}

std::vector<EstimateTable> propagate(const std::vector<EstimateTable>& previous,
                                     const std::vector<std::vector<int>>& visibility,
                                     std::span<const double> own_normalized, int t)
{
    const int n = static_cast<int>(previous.size());
    if (static_cast<int>(visibility.size()) != n || static_cast<int>(own_normalized.size()) != n) {
        throw ValidationError("propagate: tables, visibility and values must cover the same agents");
    }
    std::vector<std::vector<char>> sees(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) {
        for (int j : visibility[static_cast<std::size_t>(i)]) {
            if (j < 0 || j >= n) {
                throw ValidationError("propagate: agent " + std::to_string(i) + " sees unknown agent " +
                                      std::to_string(j));
            }
            if (j == i) {
                throw ValidationError("propagate: agent " + std::to_string(i) + " lists itself as visible");
            }
            sees[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        }
    }

    std::vector<EstimateTable> next = previous;
    for (int i = 0; i < n; ++i) {
        const auto& row = sees[static_cast<std::size_t>(i)];
        EstimateTable& mine = next[static_cast<std::size_t>(i)];
        // phase 1: adopt the freshest neighbour entry for agents out of sight
        for (int k = 0; k < n; ++k) {
            if (k == i || row[static_cast<std::size_t>(k)] != 0) {
                continue;
            }
            int best = -1;
            for (int j = 0; j < n; ++j) {
                if (row[static_cast<std::size_t>(j)] == 0) {
                    continue;
                }
                if (best < 0 || previous[static_cast<std::size_t>(j)].tau[static_cast<std::size_t>(k)] >
                                    previous[static_cast<std::size_t>(best)].tau[static_cast<std::size_t>(k)]) {
                    best = j;
                }
            }
            if (best < 0) {
                continue;
            }
            const EstimateTable& src = previous[static_cast<std::size_t>(best)];
            if (src.tau[static_cast<std::size_t>(k)] > previous[static_cast<std::size_t>(i)].tau[static_cast<std::size_t>(k)]) {
                mine.estimate[static_cast<std::size_t>(k)] = src.estimate[static_cast<std::size_t>(k)];
                mine.tau[static_cast<std::size_t>(k)] = src.tau[static_cast<std::size_t>(k)];
            }
        }
        // phase 3: direct observation
        for (int j = 0; j < n; ++j) {
            if (row[static_cast<std::size_t>(j)] != 0) {
                mine.estimate[static_cast<std::size_t>(j)] = own_normalized[static_cast<std::size_t>(j)];
                mine.tau[static_cast<std::size_t>(j)] = t;
            }
        }
    }
    return next;
}

long long total_age(const std::vector<EstimateTable>& tables, int t)
{
    long long sum = 0;
    for (const auto& table : tables) {
        for (std::size_t j = 0; j < table.tau.size(); ++j) {
            if (static_cast<int>(j) != table.owner) {
                sum += t - table.tau[j];
            }
        }
    }
    return sum;
}

void AgeAccumulator::add(const std::vector<EstimateTable>& tables, int t)
{
    sum_ += total_age(tables, t);
    num_agents_ = static_cast<int>(tables.size());
    last_t_ = t;
}

double AgeAccumulator::average() const
{
    if (last_t_ < 1 || num_agents_ == 0) {
        throw ValidationError("average age needs at least steps 0 and 1");
    }
    return static_cast<double>(sum_) / static_cast<double>(num_agents_) / static_cast<double>(last_t_);
}

double average_age(const std::vector<std::vector<EstimateTable>>& history)
{
    AgeAccumulator acc;
    for (std::size_t t = 0; t < history.size(); ++t) {
        acc.add(history[t], static_cast<int>(t));
    }
    return acc.average();
}

double average_range(std::span<const shaping::SmoothedTracker> trackers)
{
    if (trackers.empty()) {
        throw ValidationError("average range needs at least one tracker");
    }
    double sum = 0.0;
    for (const auto& tr : trackers) {
        sum += tr.range();
    }
    return sum / static_cast<double>(trackers.size());
}

std::vector<DumpRow> dump_rows(const std::vector<EstimateTable>& tables, int t)
{
    std::vector<DumpRow> rows;
    for (const auto& table : tables) {
        for (std::size_t j = 0; j < table.estimate.size(); ++j) {
            if (static_cast<int>(j) != table.owner) {
                rows.push_back({t, table.owner, static_cast<int>(j), table.estimate[j], table.tau[j]});
            }
        }
    }
    return rows;
}

std::string dump_to_csv(std::span<const DumpRow> rows)
{
    std::ostringstream out;
    out << "t,owner,subject,estimate,tau\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.owner << ',' << r.subject << ',' << format_number(r.estimate) << ',' << r.tau << '\n';
    }
    return out.str();
}

} // namespace ssd::estimates
