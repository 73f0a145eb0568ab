#pragma once

// Tabular independent Q-learning over symbolic observation keys.

#include "ssd/gridworld.hpp"
#include "ssd/ini.hpp"
#include "ssd/metrics.hpp"
#include "ssd/rng.hpp"
#include "ssd/shaping.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ssd::learning {

// Byte string: one byte per window cell (kind * 8 + agent type), then the
// orientation and the timeout flag. Radius is implied by the length.
using ObservationKey = std::string;

ObservationKey encode_observation(const grid::Observation& obs);

class QTable {
public:
    struct Entry {
        std::vector<double> q;
        std::uint64_t visits = 0;

        bool operator==(const Entry&) const = default;
    };

    explicit QTable(int num_actions = 4) : num_actions_(num_actions) {}

    int num_actions() const { return num_actions_; }
    std::size_t size() const { return entries_.size(); }

    // Unvisited keys read as zeros.
    double value(const ObservationKey& key, int action) const;
    double max_value(const ObservationKey& key) const;
    const Entry* find(const ObservationKey& key) const;
    Entry& entry(const ObservationKey& key);

    // Sorted by key; keys in hex, values as hex floats so the round trip is exact.
    std::string to_text() const;
    static QTable from_text(std::string_view text);

    bool operator==(const QTable&) const = default;

private:
    int num_actions_;
    std::unordered_map<ObservationKey, Entry> entries_;
};

// Epsilon-greedy over actions 0..num_actions-1; greedy ties broken uniformly.
int select_action(const QTable& q, const ObservationKey& key, double epsilon, Rng& rng);

void q_update(QTable& q, const ObservationKey& key, int action, double reward, const ObservationKey& next_key,
              bool terminal, double lr, double gamma);

struct LearnerConfig {
    double lr = 0.1;
    double gamma = 0.99;
    double epsilon_start = 0.8;
    double epsilon_end = 0.1;
    long long epsilon_decay_steps = -1; // -1: first 20% of training
    long long training_steps = 100000;
    long long eval_period = 10000;
    int eval_episodes = 10;
    double eval_epsilon = 0.05;

    long long decay_steps() const;
    double epsilon_at(long long step) const;
    void validate() const;

    bool operator==(const LearnerConfig&) const = default;
};

LearnerConfig read_learner_config(const IniSection* section);
void write_learner_config(const LearnerConfig& config, IniSection& section);

struct LogRow {
    long long eval_step = 0;
    std::uint64_t seed = 0;
    metrics::MetricRow metric;

    bool operator==(const LogRow&) const = default;
};

struct TrainingLog {
    std::vector<grid::AgentType> types;
    std::vector<LogRow> rows;

    // eval_step,seed,agent,agent_type,metric,value; "*" marks aggregated rows.
    std::string to_csv() const;

    bool operator==(const TrainingLog&) const = default;
};

struct StepTrace {
    long long step = 0; // global training step
    int episode = 0;
    int t = 0; // step within the episode, after the transition
    std::span<const double> extrinsic;
    std::span<const double> shaped;
    std::span<const shaping::SmoothedTracker> trackers;
};

struct TrainResult {
    TrainingLog log;
    std::vector<QTable> tables;
};

std::string checkpoint_to_text(std::span<const QTable> tables);
std::vector<QTable> checkpoint_from_text(std::string_view text);

// Runs independent learners for `learner.training_steps` environment steps,
// evaluating at step 0 and every `eval_period` steps.
TrainResult train(const grid::EnvConfig& env, const shaping::ShapingConfig& shaping,
                  const LearnerConfig& learner, std::uint64_t seed,
                  const std::function<void(const StepTrace&)>& on_step = {});

// One evaluation episode with fixed tables; returns its metric rows.
std::vector<metrics::MetricRow> evaluate_episode(const grid::EnvConfig& env, const shaping::ShapingConfig& shaping,
                                                 std::span<const QTable> tables, double epsilon,
                                                 std::uint64_t seed);

} // namespace ssd::learning
