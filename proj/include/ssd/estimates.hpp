#pragma once

// Decentralised, timestamped estimates of the other agents' normalised
// smoothed rewards, exchanged only between agents that can see each other.

#include "ssd/shaping.hpp"

#include <span>
#include <string>
#include <vector>

namespace ssd::estimates {

inline constexpr double kInitialEstimate = 0.5;

struct EstimateTable {
    int owner = 0;
    std::vector<double> estimate; // indexed by agent id; the owner's slot is unused
    std::vector<int> tau;

    static EstimateTable initial(int owner, int num_agents);

    // Estimates of everyone but the owner, in id order.
    std::vector<double> others() const;

    bool operator==(const EstimateTable&) const = default;
};

std::vector<EstimateTable> initial_tables(int num_agents);

// One synchronous round at step t. All reads hit `previous`:
//   1. for every k that i cannot see, adopt the entry of the visible neighbour
//      holding the newest timestamp for k (lowest id on ties), provided it is
//      newer than i's own entry
//   2. (own smoothed value is refreshed by the caller)
//   3. visible agents are observed directly: estimate = own_normalized[j], tau = t
std::vector<EstimateTable> propagate(const std::vector<EstimateTable>& previous,
                                     const std::vector<std::vector<int>>& visibility,
                                     std::span<const double> own_normalized, int t);

// Sum over i and j != i of (t - tau) for one step.
long long total_age(const std::vector<EstimateTable>& tables, int t);

// Running form of the average-age metric over steps 0..T.
class AgeAccumulator {
public:
    void add(const std::vector<EstimateTable>& tables, int t);
    // (1/N)(1/T) * accumulated sum, with T the last step added.
    double average() const;
    int last_step() const { return last_t_; }

private:
    long long sum_ = 0;
    int num_agents_ = 0;
    int last_t_ = -1;
};

// history[t] holds the tables after step t, for t = 0..T; T >= 1.
double average_age(const std::vector<std::vector<EstimateTable>>& history);

// Mean of (e_max - e_min) over agents.
double average_range(std::span<const shaping::SmoothedTracker> trackers);

struct DumpRow {
    int t = 0;
    int owner = 0;
    int subject = 0;
    double estimate = 0.0;
    int tau = 0;

    bool operator==(const DumpRow&) const = default;
};

std::vector<DumpRow> dump_rows(const std::vector<EstimateTable>& tables, int t);
std::string dump_to_csv(std::span<const DumpRow> rows);

} // namespace ssd::estimates
