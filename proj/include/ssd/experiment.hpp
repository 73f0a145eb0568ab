#pragma once

// Experiment configuration and the commands behind the ssdlab CLI.

#include "ssd/dilemma.hpp"
#include "ssd/estimates.hpp"
#include "ssd/gridworld.hpp"
#include "ssd/learning.hpp"
#include "ssd/shaping.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssd::experiment {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr const char* kOutputRootEnv = "SSD_OUTPUT_ROOT";

struct SchellingOptions {
    int episodes = 10; // per seed and role assignment
    int density_threshold = 3;

    bool operator==(const SchellingOptions&) const = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    grid::EnvConfig env = grid::EnvConfig::coins();
    shaping::ShapingConfig shaping;
    learning::LearnerConfig learner;
    std::vector<std::uint64_t> seeds = {0};
    std::string output_dir = "runs";
    bool write_checkpoints = false;
    bool write_audit = false; // per-step shaping audit of the training run
    SchellingOptions schelling;

    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_experiment(std::string_view text);
std::string serialize_experiment(const ExperimentConfig& config);
ExperimentConfig load_experiment(const std::filesystem::path& path);

// FNV-1a over the serialized config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// output_dir, or $SSD_OUTPUT_ROOT when set, joined with the experiment name.
std::filesystem::path output_directory(const ExperimentConfig& config);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// ---------------------------------------------------------------------------
// Schelling sweeps

struct SchellingResult {
    std::vector<dilemma::SchellingSample> samples;
    dilemma::SchellingDiagram diagram;
    dilemma::EmpiricalReport report;
};

// For every per-type cooperator count (the first c agents of a type
// cooperate) and every seed and episode, plays scripted policies and records
// each agent's return against the number of other cooperators.
SchellingResult run_schelling(const grid::EnvConfig& env, const SchellingOptions& options,
                              const std::vector<std::uint64_t>& seeds);

// Total extrinsic return of one scripted episode with a fixed role per agent.
struct ScriptedEpisode {
    std::vector<double> returns;
    grid::EventLog events;
};

ScriptedEpisode play_scripted(const grid::EnvConfig& env, const std::vector<dilemma::Strategy>& roles,
                              std::uint64_t seed, int density_threshold = 3);

// ---------------------------------------------------------------------------
// Estimate traces

struct TraceStep {
    int t = 0;
    std::vector<double> rewards;
    std::vector<std::vector<int>> visibility;
};

struct Trace {
    int num_agents = 0;
    double gamma = 0.99;
    double lambda = 0.9;
    std::vector<TraceStep> steps;
};

// Lines: `agents N`, `gamma g`, `lambda l`,
// `step t rewards r0 .. rN-1 visible a-b a>b ...` (a-b: mutual, a>b: a sees b).
Trace parse_trace(std::string_view text);

struct TraceResult {
    std::vector<estimates::DumpRow> rows;
    std::optional<double> average_age;
};

TraceResult run_trace(const Trace& trace);

// ---------------------------------------------------------------------------
// Commands. Each returns the process exit code; errors propagate as exceptions.

inline constexpr int kExitNotADilemma = 3;

int cmd_classify(const std::filesystem::path& game, std::ostream& out);
int cmd_normalize(const std::filesystem::path& game, std::ostream& out);
int cmd_schelling(const std::filesystem::path& config, std::ostream& out);
int cmd_train(const std::filesystem::path& config, std::ostream& out);
int cmd_trace(const std::filesystem::path& trace, const std::optional<std::filesystem::path>& dump,
              std::ostream& out);
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out);

struct TrainOutputs {
    std::filesystem::path directory;
    std::vector<std::filesystem::path> logs; // one training log per seed
    std::filesystem::path metrics;
    std::filesystem::path manifest;
};

TrainOutputs run_training(const ExperimentConfig& config, int max_threads = 0);

} // namespace ssd::experiment
